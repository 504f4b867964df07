#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "mechindep/cli.hpp"
#include "mechindep/criteria.hpp"
#include "mechindep/io.hpp"
#include "mechindep/report.hpp"
#include "mechindep/sparse_subspace.hpp"
#include "oracle.hpp"

using namespace mechindep;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out;
    std::string err;
    Json json() const { return Json::parse(out); }
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "mechindep");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    Run r;
    r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::string data(const std::string& name) { return std::string(MECHINDEP_TEST_DATA) + "/" + name; }

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "mechindep_cli_test";
    fs::create_directories(dir);
    return dir / name;
}

const Json* find_cert(const Json& report, const std::string& criterion) {
    for (const auto& c : report.at("certificates"))
        if (c.at("criterion") == criterion) return &c;
    return nullptr;
}

}  // namespace

TEST_CASE("analyze D with d,m,s") {
    const auto r = run({"analyze", "--criteria", "d,m,s", "--blocks", "2,2", data("D.csv")});
    CHECK(r.code == 1);
    const auto j = r.json();
    CHECK(j["header"]["tool"] == "mechindep");
    CHECK(j["header"]["command"] == "analyze");
    CHECK(j["header"].contains("seed"));
    REQUIRE(find_cert(j, "D"));
    CHECK(find_cert(j, "D")->at("holds") == false);
    CHECK(find_cert(j, "M")->at("holds") == true);
    CHECK(find_cert(j, "S")->at("holds") == true);
    CHECK(find_cert(j, "S")->at("witness")["rhoPlus"] == 14);
}

TEST_CASE("cli verdicts match direct library calls") {
    const Matrix b = read_matrix_csv(data("B.csv"));
    const BlockSpec blocks({1, 1, 1});
    const auto r = run({"analyze", "--criteria", "d,m,s,o", "--blocks", "1,1,1", data("B.csv")});
    const auto j = r.json();
    CHECK(Certificate::from_json(*find_cert(j, "D")) == check_type_d(b, blocks));
    CHECK(Certificate::from_json(*find_cert(j, "M")) == check_type_m(b, blocks));
    CHECK(Certificate::from_json(*find_cert(j, "S")) == check_type_s(b, blocks));
    CHECK(Certificate::from_json(*find_cert(j, "O")) == check_type_o(b, blocks));
}

TEST_CASE("decompose A") {
    const auto r = run({"decompose", data("A.csv")});
    CHECK(r.code == 0);
    const auto j = r.json();
    CHECK(j["components"] == Json::parse("[[1,2]]"));
    CHECK(j["inferredBlocks"] == Json::parse("[2]"));

    const auto text = run({"decompose", "--format", "text", data("A.csv")});
    CHECK(text.out.find("components: [[1,2]]") != std::string::npos);
}

TEST_CASE("decompose DOT output") {
    const auto r = run({"decompose", "--format", "dot", data("D.csv")});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("graph GD {", 0) == 0);
    CHECK(r.out.find("subgraph cluster_1") != std::string::npos);
    CHECK(std::count(r.out.begin(), r.out.end(), '{') == std::count(r.out.begin(), r.out.end(), '}'));
    const auto m = run({"decompose", "--graph", "m", "--format", "dot", data("D.csv")});
    CHECK(m.out.find("3 -- 4") != std::string::npos);
    CHECK(run({"analyze", "--format", "dot", data("D.csv")}).code == 2);
}

TEST_CASE("gap on B") {
    const auto r = run({"gap", "--blocks", "1,1,1", data("B.csv")});
    CHECK(r.code == 1);
    const auto j = r.json();
    CHECK(j["rhoPlus"] == 9);
    CHECK(j["rhoMinus"] == 9);
    CHECK(j["independent"] == false);
    CHECK(j["header"]["seed"] == kGenericSeed);

    const auto pw = run({"gap", "--pairwise", "--blocks", "1,1,1", data("B.csv")});
    const auto pj = pw.json();
    REQUIRE(find_cert(pj, "S-pairwise"));
    CHECK(find_cert(pj, "S-pairwise")->at("holds") == true);
}

TEST_CASE("reports are byte-identical across runs") {
    const std::vector<std::string> args{"analyze", "--criteria", "d,m,s,hierarchy", "--blocks", "2,2", data("D.csv")};
    CHECK(run(args).out == run(args).out);
    const std::vector<std::string> audit{"audit", "--kind", "blockcount", "--draws", "20", data("A.csv")};
    CHECK(run(audit).out == run(audit).out);
}

TEST_CASE("parse errors exit 2 with a location") {
    const auto bad = scratch("bad.csv");
    write_text_file(bad.string(), "1,2\n3,x\n");
    const auto r = run({"analyze", bad.string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("line 2") != std::string::npos);
    CHECK(r.err.find("column 3") != std::string::npos);

    CHECK(run({"analyze", data("missing.csv")}).code == 2);
    CHECK(run({"analyze", "--blocks", "3,3", data("D.csv")}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"analyze", "--criteria", "q", data("D.csv")}).code == 2);
    CHECK(run({"analyze", "--bogus", data("D.csv")}).code == 2);
}

TEST_CASE("tolerance environment variable and flag") {
    const auto path = scratch("tiny.csv");
    write_text_file(path.string(), "1,1e-6\n0,1\n");
    const std::vector<std::string> args{"analyze", "--criteria", "d", path.string()};

    ::unsetenv("MECHINDEP_TOL");
    CHECK(run(args).code == 1);
    ::setenv("MECHINDEP_TOL", "1e-3", 1);
    const auto loose = run(args);
    CHECK(loose.code == 0);
    CHECK(loose.json()["header"]["tolerance"]["rel"] == 1e-3);
    auto flagged = args;
    flagged.insert(flagged.begin() + 1, {"--tol", "1e-9"});
    CHECK(run(flagged).code == 1);
    ::setenv("MECHINDEP_TOL", "abc", 1);
    CHECK(run(args).code == 2);
    ::unsetenv("MECHINDEP_TOL");
}

TEST_CASE("batch mode orders files by name") {
    const auto dir = scratch("batch");
    fs::create_directories(dir);
    fs::copy_file(data("C.csv"), dir / "b_second.csv", fs::copy_options::overwrite_existing);
    fs::copy_file(data("A.csv"), dir / "a_first.csv", fs::copy_options::overwrite_existing);
    const auto r = run({"analyze", "--batch", dir.string(), "--criteria", "m"});
    CHECK(r.code == 0);
    const auto j = r.json();
    REQUIRE(j["files"].size() == 2);
    CHECK(j["files"][0]["input"].get<std::string>().find("a_first.csv") != std::string::npos);
    CHECK(j["files"][1]["input"].get<std::string>().find("b_second.csv") != std::string::npos);
}

TEST_CASE("topology, synth and audit commands") {
    const auto a = run({"topology", data("region_a.json")});
    CHECK(a.code == 1);
    CHECK(a.json()["certificates"][0]["witness"]["regionConnected"] == true);

    const auto prefix = scratch("synth").string();
    const auto s = run({"synth", "--K", "2", "--overlap", "0.5", "--seed", "3", "--out", prefix});
    CHECK(s.code == 0);
    const Matrix j = read_matrix_csv(prefix + ".csv");
    CHECK(j.rows() == 60);
    const auto side = read_json_file(prefix + ".json");
    CHECK(side["expectedVerdicts"]["D"] == false);
    CHECK(run({"analyze", "--criteria", "d", "--blocks", "3,3", prefix + ".csv"}).code == 1);
    CHECK(run({"analyze", "--criteria", "m", "--blocks", "3,3", prefix + ".csv"}).code == 0);

    const auto stdout_synth = run({"synth", "--K", "2", "--slot-out", "2", "--slot-dim", "1"});
    CHECK(stdout_synth.code == 0);
    CHECK(parse_matrix_csv(stdout_synth.out).rows() == 4);

    const auto audit = run({"audit", "--kind", "blockcount", "--expected", "1", "--draws", "20", data("A.csv")});
    CHECK(audit.code == 0);
    CHECK(audit.json()["header"]["seed"] == 20240607);
    CHECK(run({"audit", "--kind", "blockcount", "--expected", "2", "--draws", "20", data("A.csv")}).code == 1);

    const auto h = run({"audit", "--kind", "hierarchy", "--blocks", "1,1,1", data("C.csv")});
    CHECK(h.code == 0);
}

TEST_CASE("json reports round-trip") {
    const auto r = run({"analyze", "--criteria", "d,m", "--blocks", "2,2", data("D.csv")});
    const auto certs = certificates_from_report(r.json());
    REQUIRE(certs.size() == 2);
    CHECK(certs[0].to_json() == r.json()["certificates"][0]);
}

TEST_CASE("tensor inputs") {
    const auto h = run({"analyze", "--criteria", "h2,h-irr", "--blocks", "1,1", "--tensor", data("hessian_additive.json")});
    CHECK(h.code == 0);
    const auto bad = run({"analyze", "--criteria", "h2", "--blocks", "1,1", "--tensor", data("hessian_interaction.json")});
    CHECK(bad.code == 1);

    // The matrix positional after --tensor must stay the matrix input; here
    // the Jacobian of (s1^2, s2^2, s1 + s2) at the origin joins the Hessian.
    const auto jpath = scratch("jac.csv");
    write_text_file(jpath.string(), "0,0\n0,0\n1,1\n");
    const auto sep = run({"analyze", "--criteria", "separability", "--blocks", "1,1", "--tensor",
                          data("hessian_additive.json"), jpath.string()});
    CHECK(sep.code != 2);
    CHECK(sep.json()["header"]["input"] == jpath.string());
    CHECK(sep.json()["certificates"][0]["witness"]["order"] == 2);
}
