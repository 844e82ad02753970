#pragma once

// Command-line front end. dispatch() runs one invocation and writes its
// whole result at the end, so output never interleaves with worker threads.
//
// Exit status: 0 success / true / found / holds, 1 false / none / violation,
// 2 any parse, validation or budget error.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <functional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dsw/embedding.hpp"
#include "dsw/error.hpp"
#include "dsw/orders.hpp"
#include "dsw/ordinal.hpp"
#include "dsw/rank.hpp"
#include "dsw/scattered.hpp"
#include "dsw/search.hpp"
#include "dsw/similarity.hpp"
#include "dsw/tree.hpp"

namespace dsw::cli {

using Json = nlohmann::ordered_json;

/// Result of one invocation: exit status plus the line-oriented and
/// structured renderings of the same fields.
struct Result {
    int status = 0;
    std::vector<std::string> lines;
    Json doc = Json::object();
};

namespace detail {

inline std::string order_name(std::partial_ordering c)
{
    if (c == std::partial_ordering::less) return "LT";
    if (c == std::partial_ordering::greater) return "GT";
    if (c == std::partial_ordering::equivalent) return "EQ";
    return "INCOMPARABLE";
}

inline Tree load_tree(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open " + path);
    }
    return read_tree(in);
}

inline Colouring load_colouring(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open " + path);
    }
    return read_colouring(in);
}

inline Json tuple_json(const Tuple& u)
{
    Json out = Json::array();
    for (const auto& s : u) {
        out.push_back(to_string(s));
    }
    return out;
}

inline Json code_json(const SimCode& code)
{
    Json meets = Json::array();
    for (std::uint32_t l = 0; l < code.n; ++l) {
        Json row = Json::array();
        for (std::uint32_t m = 0; m < code.n; ++m) {
            row.push_back(code.meet(l, m));
        }
        meets.push_back(std::move(row));
    }
    return Json{{"n", code.n}, {"lengths", code.lengths}, {"meets", std::move(meets)}, {"order", code.order}};
}

inline Json colouring_json(const Colouring& c)
{
    Json assignments = Json::array();
    for (const auto& [u, colour] : c.assignments()) {
        assignments.push_back(Json{{"tuple", tuple_json(u)}, {"colour", colour}});
    }
    return Json{{"mu", c.num_colours()}, {"arities", c.arities()}, {"assignments", std::move(assignments)}};
}

inline std::vector<std::string> colouring_lines(const Colouring& c)
{
    std::ostringstream text;
    write_colouring(text, c);
    std::vector<std::string> lines;
    std::string line;
    std::istringstream in(text.str());
    while (std::getline(in, line)) {
        lines.push_back(line);
    }
    return lines;
}

inline void report_violation(Result& r, const UniformityVerdict& v, const std::string& property)
{
    r.doc["property"] = property;
    if (v.holds()) {
        r.doc["holds"] = true;
        r.lines.push_back("holds");
        return;
    }
    r.status = 1;
    const auto& x = *v.violation;
    r.doc["holds"] = false;
    r.doc["violation"] = Json{{"first", tuple_json(x.first)},
                              {"first_colour", x.first_colour},
                              {"second", tuple_json(x.second)},
                              {"second_colour", x.second_colour}};
    r.lines.push_back("violation");
    r.lines.push_back("[" + to_string(x.first) + "] -> " + std::to_string(x.first_colour));
    r.lines.push_back("[" + to_string(x.second) + "] -> " + std::to_string(x.second_colour));
}

inline std::set<std::size_t> parse_arities(const std::string& text)
{
    std::set<std::size_t> out;
    std::istringstream in(text);
    std::string piece;
    while (std::getline(in, piece, ',')) {
        dsw::detail::Cursor cur(dsw::detail::trim(piece));
        out.insert(cur.natural().convert_to<std::size_t>());
        if (!cur.done()) {
            cur.fail("bad arity list");
        }
    }
    if (out.empty()) {
        throw ParseError("empty arity list", 0);
    }
    return out;
}

} // namespace detail

/// Runs one invocation. `args` excludes the program name.
inline int dispatch(std::vector<std::string> args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Decreasing-sequence trees: ranks, orders, similarity, partition search"};
    app.name("dsw");
    app.require_subcommand(1);

    bool json = false;
    unsigned threads = 1;
    std::uint64_t budget = SearchLimits{}.colouring_budget;
    std::uint64_t seed = 0;
    app.add_flag("--json", json, "emit one JSON document");
    app.add_option("--threads", threads, "worker threads for exhaustive checks")->check(CLI::Range(1u, 1024u));
    app.add_option("--budget", budget, "maximum number of colourings to enumerate");
    app.add_option("--seed", seed, "seed for generated colourings");

    Result result;
    std::function<void()> action;
    auto set = [&](CLI::App* sub, std::string name, std::function<void()> body) {
        sub->callback([&action, &result, name = std::move(name), body = std::move(body)] {
            result.doc["command"] = name;
            action = body;
        });
    };
    auto limits = [&] {
        SearchLimits l;
        l.colouring_budget = budget;
        l.threads = threads;
        return l;
    };

    // ord ------------------------------------------------------------------
    auto* ord = app.add_subcommand("ord", "ordinal arithmetic")->require_subcommand(1);
    std::string oa, ob;
    auto* ord_cmp = ord->add_subcommand("cmp", "compare two ordinals");
    ord_cmp->add_option("A", oa)->required();
    ord_cmp->add_option("B", ob)->required();
    set(ord_cmp, "ord cmp", [&] {
        const auto c = compare(parse_ordinal(oa), parse_ordinal(ob));
        const auto name = detail::order_name(c);
        result.doc["result"] = name;
        result.lines.push_back(name);
    });
    auto* ord_add = ord->add_subcommand("add", "ordinal sum A+B");
    ord_add->add_option("A", oa)->required();
    ord_add->add_option("B", ob)->required();
    set(ord_add, "ord add", [&] {
        const auto v = to_string(parse_ordinal(oa) + parse_ordinal(ob));
        result.doc["result"] = v;
        result.lines.push_back(v);
    });
    auto* ord_mul = ord->add_subcommand("mul", "ordinal times natural A*N");
    ord_mul->add_option("A", oa)->required();
    ord_mul->add_option("N", ob)->required();
    set(ord_mul, "ord mul", [&] {
        dsw::detail::Cursor cur(ob);
        const Natural n = cur.natural();
        if (!cur.done()) {
            cur.fail("expected a natural number");
        }
        const auto v = to_string(parse_ordinal(oa) * n);
        result.doc["result"] = v;
        result.lines.push_back(v);
    });

    // ds -------------------------------------------------------------------
    auto* ds = app.add_subcommand("ds", "the trees ds(n)")->require_subcommand(1);
    std::size_t ds_n = 0;
    std::size_t ds_cap = kDefaultEnumCap;
    auto* ds_enum = ds->add_subcommand("enum", "list ds(N) in canonical order");
    ds_enum->add_option("N", ds_n)->required();
    ds_enum->add_option("--cap", ds_cap, "largest N accepted");
    set(ds_enum, "ds enum", [&] {
        const Tree t = enum_ds(ds_n, ds_cap);
        Json nodes = Json::array();
        for (const auto& s : t.nodes()) {
            nodes.push_back(to_string(s));
            result.lines.push_back(to_string(s));
        }
        result.doc["nodes"] = std::move(nodes);
    });

    // tree -----------------------------------------------------------------
    auto* tree = app.add_subcommand("tree", "tree files")->require_subcommand(1);
    std::string tree_file, at_seq;
    std::size_t mu = 1;
    std::optional<std::size_t> lambda;
    auto* tree_rank = tree->add_subcommand("rank", "rank of a node");
    tree_rank->add_option("--mu", mu, "multiplicity threshold")->required();
    tree_rank->add_option("--lambda", lambda, "reduction bound");
    tree_rank->add_option("--at", at_seq, "the node")->required();
    tree_rank->add_option("FILE", tree_file)->required();
    set(tree_rank, "tree rank", [&] {
        const Tree t = detail::load_tree(tree_file);
        const auto r = rank(t, RankParams{mu, lambda}, parse_seq(at_seq));
        if (!r) {
            result.status = 1;
            result.doc["rank"] = nullptr;
            result.lines.push_back("not-in-tree");
            return;
        }
        result.doc["rank"] = *r;
        result.lines.push_back(std::to_string(*r));
    });
    auto* tree_validate = tree->add_subcommand("validate", "check a tree file");
    tree_validate->add_option("FILE", tree_file)->required();
    set(tree_validate, "tree validate", [&] {
        try {
            const Tree t = detail::load_tree(tree_file);
            result.doc["valid"] = true;
            result.doc["nodes"] = t.size();
            result.lines.push_back("ok " + std::to_string(t.size()) + " nodes");
        } catch (const InvalidTree& e) {
            result.status = 1;
            result.doc["valid"] = false;
            result.doc["reason"] = e.what();
            result.lines.push_back(std::string("invalid: ") + e.what());
        }
    });

    // seq ------------------------------------------------------------------
    auto* seq = app.add_subcommand("seq", "decreasing sequences")->require_subcommand(1);
    std::string order = "lex2", sa, sb;
    std::vector<std::string> seqs;
    auto* seq_cmp = seq->add_subcommand("cmp", "compare two sequences");
    seq_cmp->add_option("--order", order, "lex1, lex2, lex3 or star")->required();
    seq_cmp->add_option("A", sa)->required();
    seq_cmp->add_option("B", sb)->required();
    set(seq_cmp, "seq cmp", [&] {
        const auto kind = parse_order_kind(order);
        if (!kind) {
            throw ParseError("unknown order '" + order + "'", 0);
        }
        const auto name = detail::order_name(compare_by(*kind, parse_seq(sa), parse_seq(sb)));
        result.doc["order"] = order;
        result.doc["result"] = name;
        result.lines.push_back(name);
    });
    auto* seq_min = seq->add_subcommand("min", "minimum of a finite set");
    seq_min->add_option("--order", order, "lex1 or lex2")->required();
    seq_min->add_option("SEQ", seqs)->required();
    set(seq_min, "seq min", [&] {
        std::vector<DecSeq> set;
        for (const auto& s : seqs) {
            set.push_back(parse_seq(s));
        }
        DecSeq m;
        if (order == "lex2") {
            m = min_lex2(set);
        } else if (order == "lex1") {
            m = min_lex1(set);
        } else {
            throw ParseError("seq min supports lex1 and lex2", 0);
        }
        result.doc["order"] = order;
        result.doc["result"] = to_string(m);
        result.lines.push_back(to_string(m));
    });

    // sim ------------------------------------------------------------------
    auto* sim = app.add_subcommand("sim", "similarity of tuples")->require_subcommand(1);
    std::string tu, tv;
    auto* sim_code_cmd = sim->add_subcommand("code", "similarity code of 'SEQ ; SEQ ; ...'");
    sim_code_cmd->add_option("TUPLE", tu)->required();
    set(sim_code_cmd, "sim code", [&] {
        const auto code = sim_code(parse_items(tu));
        result.doc["code"] = detail::code_json(code);
        result.lines.push_back(to_string(code));
    });
    auto* sim_similar = sim->add_subcommand("similar", "are two tuples similar");
    sim_similar->add_option("U", tu)->required();
    sim_similar->add_option("V", tv)->required();
    set(sim_similar, "sim similar", [&] {
        const bool same = is_similar(parse_items(tu), parse_items(tv));
        result.status = same ? 0 : 1;
        result.doc["similar"] = same;
        result.lines.push_back(same ? "similar" : "not-similar");
    });

    // color ----------------------------------------------------------------
    auto* color = app.add_subcommand("color", "colourings")->require_subcommand(1);
    std::string colors_file;
    std::size_t n_end = 1;
    bool uniform = false;
    auto* color_check = color->add_subcommand("check", "n-end-uniformity of a colouring on a tree");
    color_check->add_option("--tree", tree_file)->required();
    color_check->add_option("--colors", colors_file)->required();
    auto* n_opt = color_check->add_option("-n", n_end, "number of trailing items that may vary");
    color_check->add_flag("--uniform", uniform, "check full uniformity instead")->excludes(n_opt);
    set(color_check, "color check", [&] {
        const Tree t = detail::load_tree(tree_file);
        const Colouring c = detail::load_colouring(colors_file);
        if (!uniform && n_opt->count() == 0) {
            throw PreconditionError("-n is required unless --uniform is given");
        }
        if (uniform) {
            detail::report_violation(result, is_uniform(t, c), "uniform");
        } else {
            result.doc["n"] = n_end;
            detail::report_violation(result, is_n_end_uniform(t, c, n_end), "n-end-uniform");
        }
    });
    std::string gen_kind = "random";
    std::string arities_text = "1";
    Colour gen_mu = 2;
    auto* color_gen = color->add_subcommand("generate", "write a generated colouring");
    color_gen->add_option("--tree", tree_file)->required();
    color_gen->add_option("--mu", gen_mu)->required()->check(CLI::PositiveNumber);
    color_gen->add_option("--arities", arities_text, "comma-separated tuple sizes");
    color_gen->add_option("--kind", gen_kind, "random, constant, length or class")
        ->check(CLI::IsMember({"random", "constant", "length", "class"}));
    set(color_gen, "color generate", [&] {
        const Tree t = detail::load_tree(tree_file);
        const auto arities = detail::parse_arities(arities_text);
        Colouring c(gen_mu, arities);
        if (gen_kind == "random") {
            c = random_colouring(t, arities, gen_mu, seed);
        } else if (gen_kind == "constant") {
            c = constant_colouring(t, arities, gen_mu, 0);
        } else if (gen_kind == "length") {
            c = length_colouring(t, arities, gen_mu, [&](const std::vector<std::size_t>& lengths) {
                std::size_t h = 0;
                for (auto l : lengths) {
                    h = h * 31 + l;
                }
                return static_cast<Colour>(h % gen_mu);
            });
        } else {
            c = class_colouring(t, arities, gen_mu, ClassRegistry::realized_in(t, *arities.rbegin()));
        }
        result.doc["colouring"] = detail::colouring_json(c);
        result.lines = detail::colouring_lines(c);
    });

    // search ---------------------------------------------------------------
    auto* search = app.add_subcommand("search", "copies and exhaustive verification")->require_subcommand(1);
    std::string pattern_file;
    auto* search_copy = search->add_subcommand("copy", "first n-end-uniform copy of the pattern");
    search_copy->add_option("--tree", tree_file)->required();
    search_copy->add_option("--pattern", pattern_file)->required();
    search_copy->add_option("--colors", colors_file)->required();
    search_copy->add_option("-n", n_end)->required();
    set(search_copy, "search copy", [&] {
        const Tree t = detail::load_tree(tree_file);
        const Tree s = detail::load_tree(pattern_file);
        const Colouring c = detail::load_colouring(colors_file);
        const auto w = find_n_end_uniform_copy(t, s, c, n_end, limits());
        result.doc["n"] = n_end;
        if (!w) {
            result.status = 1;
            result.doc["found"] = false;
            result.lines.push_back("none");
            return;
        }
        result.doc["found"] = true;
        result.lines.push_back("found");
        Json map = Json::array();
        for (const auto& [from, to] : w->embedding.map()) {
            map.push_back(Json{{"from", to_string(from)}, {"to", to_string(to)}});
            result.lines.push_back("map " + to_string(from) + " -> " + to_string(to));
        }
        Json cert = Json::array();
        for (const auto& e : w->certificate) {
            cert.push_back(Json{{"prefix", detail::tuple_json(e.prefix)},
                                {"class", detail::code_json(e.code)},
                                {"colour", e.colour},
                                {"members", e.members}});
            result.lines.push_back("class [" + to_string(e.prefix) + "] " + to_string(e.code) + " colour "
                                   + std::to_string(e.colour) + " members " + std::to_string(e.members));
        }
        result.doc["embedding"] = std::move(map);
        result.doc["certificate"] = std::move(cert);
    });
    Colour verify_mu = 2;
    std::size_t arity = 0;
    auto* search_verify = search->add_subcommand("verify", "exhaustive check over all colourings");
    search_verify->add_option("--tree", tree_file)->required();
    search_verify->add_option("--pattern", pattern_file)->required();
    search_verify->add_option("--mu", verify_mu)->required()->check(CLI::PositiveNumber);
    auto* arity_opt = search_verify->add_option("--arity", arity, "size of the coloured tuples");
    auto* arities_opt = search_verify->add_option("--arities", arities_text, "several sizes, comma-separated");
    arity_opt->excludes(arities_opt);
    search_verify->add_option("-n", n_end)->required();
    set(search_verify, "search verify", [&, arity_opt, arities_opt] {
        std::set<std::size_t> arities;
        if (arity_opt->count() > 0) {
            arities = {arity};
        } else if (arities_opt->count() > 0) {
            arities = detail::parse_arities(arities_text);
        } else {
            throw PreconditionError("search verify needs --arity or --arities");
        }
        const Tree t = detail::load_tree(tree_file);
        const Tree s = detail::load_tree(pattern_file);
        const auto report = verify_partition_exhaustive(t, s, verify_mu, arities, n_end, limits());
        result.doc["mu"] = verify_mu;
        result.doc["arities"] = arities;
        result.doc["n"] = n_end;
        result.doc["holds"] = report.holds;
        result.doc["colourings_checked"] = report.colourings_checked;
        result.doc["colourings_total"] = report.colourings_total;
        result.lines.push_back(report.holds ? "holds" : "fails");
        result.lines.push_back("checked " + std::to_string(report.colourings_checked) + " of "
                               + std::to_string(report.colourings_total));
        if (report.counterexample) {
            result.status = 1;
            result.doc["counterexample"] = detail::colouring_json(*report.counterexample);
            result.lines.push_back("counterexample");
            for (auto& line : detail::colouring_lines(*report.counterexample)) {
                result.lines.push_back(std::move(line));
            }
        }
    });

    // scatter --------------------------------------------------------------
    auto* scatter = app.add_subcommand("scatter", "scattered order terms")->require_subcommand(1);
    std::string term_text;
    std::vector<std::string> at_position;
    bool check = false;
    auto* scatter_embed = scatter->add_subcommand("embed", "place a term's points in (ds(alpha), <3)");
    scatter_embed->add_option("--term", term_text)->required();
    scatter_embed->add_option("--at", at_position, "one position (comma-separated coordinates); allows infinite betas")
        ->delimiter(';');
    scatter_embed->add_flag("--check", check, "certify order preservation");
    set(scatter_embed, "scatter embed", [&] {
        const HausdorffTerm t = parse_term(term_text);
        const Ordinal bound = alpha_bound(t);
        result.doc["term"] = to_string(t);
        result.doc["alpha"] = to_string(bound);
        result.lines.push_back("alpha " + to_string(bound));
        Json points = Json::array();
        auto emit = [&](const Position& p, const DecSeq& image) {
            points.push_back(Json{{"position", to_string(p)}, {"image", to_string(image)}});
            result.lines.push_back(to_string(p) + " -> " + to_string(image));
        };
        if (!at_position.empty()) {
            for (const auto& text : at_position) {
                Position p;
                if (!dsw::detail::trim(text).empty()) {
                    p = parse_entries(text);
                }
                emit(p, embed_position(t, p));
            }
        } else {
            for (const auto& [p, image] : embed_term(t)) {
                emit(p, image);
            }
        }
        result.doc["points"] = std::move(points);
        if (check) {
            const bool ok = check_order_embedding(t);
            result.status = ok ? 0 : 1;
            result.doc["order_preserved"] = ok;
            result.lines.push_back(ok ? "order-preserved" : "order-violated");
        }
    });

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }

    try {
        action();
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        if (json) {
            out << Json{{"command", result.doc["command"]}, {"error", e.what()}}.dump(2) << '\n';
        }
        return 2;
    }
    result.doc["status"] = result.status;
    if (json) {
        out << result.doc.dump(2) << '\n';
    } else {
        for (const auto& line : result.lines) {
            out << line << '\n';
        }
    }
    return result.status;
}

} // namespace dsw::cli
