#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>
#include <vector>

#include "rbn/config.hpp"
#include "rbn/runners.hpp"

using namespace rbn;

namespace {

// CSV body = everything after the '#' metadata block.
std::string body_of(const std::string& csv) {
    std::size_t pos = 0;
    while (pos < csv.size() && csv[pos] == '#') {
        pos = csv.find('\n', pos);
        if (pos == std::string::npos) return "";
        ++pos;
    }
    return csv.substr(pos);
}

} // namespace

TEST_CASE("empty text gives all defaults") {
    const ParseOutcome out = parse_config("");
    REQUIRE(out.config.has_value());
    CHECK(out.config->gamma == 7.0);
    CHECK(out.config->dim == 8);
    CHECK(out.config->drift == "sign");
    CHECK(out.config->seed == 1);
}

TEST_CASE("two overrides, comments, and whitespace") {
    const ParseOutcome out = parse_config("# comment line\ngamma = 2\nD_unused\n");
    CHECK_FALSE(out.config.has_value()); // malformed third line
    const ParseOutcome ok = parse_config("gamma=2\ndim=4  # trailing comment\n");
    REQUIRE(ok.config.has_value());
    CHECK(ok.config->gamma == 2.0);
    CHECK(ok.config->dim == 4);
}

TEST_CASE("all errors reported, not just the first") {
    const ParseOutcome out = parse_config("gamma=-1\nbogus=3\ndamping=2\n");
    CHECK_FALSE(out.config.has_value());
    REQUIRE(out.errors.size() >= 3);
    bool gamma_named = false, unknown_named = false, damping_named = false;
    for (const std::string& e : out.errors) {
        if (e.find("gamma") != std::string::npos) gamma_named = true;
        if (e.find("bogus") != std::string::npos) unknown_named = true;
        if (e.find("damping") != std::string::npos) damping_named = true;
    }
    CHECK(gamma_named);
    CHECK(unknown_named);
    CHECK(damping_named);
}

TEST_CASE("constraint violations are named") {
    const ParseOutcome out = parse_config("gamma=-1");
    CHECK_FALSE(out.config.has_value());
    REQUIRE(!out.errors.empty());
    CHECK(out.errors[0].find("gamma > 0") != std::string::npos);
}

TEST_CASE("operator and drift construction from config") {
    ParseOutcome out = parse_config("eigenvalues=1,2,4\ndim=3\ndrift=lipschitz\ndrift_scale=0.25");
    REQUIRE(out.config.has_value());
    const SpectralOperator op = out.config->make_operator();
    CHECK(op.dim() == 3);
    CHECK(op.lambda(2) == 4.0);
    const DriftSpec d = out.config->make_drift();
    CHECK(d.family == DriftFamily::lipschitz);
    CHECK(d.component_scale == Vec(3, 0.25));

    out = parse_config("lambda_alpha=2\ndim=4");
    REQUIRE(out.config.has_value());
    CHECK(out.config->make_operator().lambda(3) == 16.0);
}

TEST_CASE("gronwall runner: K=0 gives constant rows") {
    ParseOutcome out = parse_config("K=0\nbeta0=0.5\nm=4\nreplicas=1");
    REQUIRE(out.config.has_value());
    const std::string csv = run_gronwall(*out.config);
    const std::string body = body_of(csv);
    // header + 17 rows
    std::size_t rows = 0;
    for (char c : body)
        if (c == '\n') ++rows;
    CHECK(rows == 18);
    CHECK(body.find("j,beta,cap") == 0);
    CHECK(body.find("\n3,0.5,") != std::string::npos);
    CHECK(body.find("\n16,0.5,") != std::string::npos);
}

TEST_CASE("lattice-stats runner carries the brute-force effective dimension") {
    ParseOutcome out = parse_config("gamma=1\nr=0\nm=10\nscale=1");
    REQUIRE(out.config.has_value());
    const std::string csv = run_lattice_stats(*out.config);
    CHECK(csv.find("gamma,r,m,effdim_bruteforce,effdim_bound,lattice_count,koltik_bound") !=
          std::string::npos);
    CHECK(body_of(csv).find("1,0,10,3,3,813,") != std::string::npos);
}

TEST_CASE("unknown subcommand rejected") {
    ExperimentConfig cfg;
    CHECK_THROWS_AS(run_subcommand("frobnicate", cfg), std::invalid_argument);
}

TEST_CASE("csv reproducibility: identical files across worker counts") {
    for (const char* sub : {"simulate-ou", "sigma-scan", "uniqueness", "exp-moment"}) {
        ParseOutcome out = parse_config(
            "dim=3\nreplicas=6\ngrid_steps=64\nn_min=2\nn_max=3\npoints=4\npaths=3\n"
            "walk_length=10\nmax_iterations=50\nseed=99\n");
        REQUIRE(out.config.has_value());
        ExperimentConfig cfg = *out.config;
        cfg.workers = 1;
        const std::string one = run_subcommand(sub, cfg);
        cfg.workers = 4;
        const std::string four = run_subcommand(sub, cfg);
        cfg.workers = 8;
        const std::string eight = run_subcommand(sub, cfg);
        CHECK(one == four);
        CHECK(four == eight);
        CHECK(!body_of(one).empty());
    }
}

TEST_CASE("metadata block echoes config and seed") {
    ParseOutcome out = parse_config("seed=31337\nK=0\nm=2\nreplicas=1");
    REQUIRE(out.config.has_value());
    const std::string csv = run_gronwall(*out.config);
    CHECK(csv.find("# version=rbnlab") != std::string::npos);
    CHECK(csv.find("# seed=31337") != std::string::npos);
    CHECK(csv.find("# gamma=7") != std::string::npos);
}
