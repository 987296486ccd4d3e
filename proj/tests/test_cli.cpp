// End-to-end tests of the qcorr binary: exit-code contract, CSV schemas,
// determinism, and the plot pipeline. The binary path comes in through
// QCORR_CLI_PATH at compile time.

#define CATCH_CONFIG_MAIN
#include <catch2/catch.hpp>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "qcorr/csv.hpp"

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output;  // stdout + stderr
};

RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string(QCORR_CLI_PATH) + " " + args + " 2>&1";
    RunResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf;
    while (std::size_t got = std::fread(buf.data(), 1, buf.size(), pipe)) r.output.append(buf.data(), got);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("cli analyze") {
    SECTION("trivial state") {
        const auto r = run_cli("analyze 0 0 0");
        CHECK(r.exit_code == 0);
        CHECK(r.output.find("Q_G = 0") != std::string::npos);
    }
    SECTION("Bell vertex with verification") {
        const auto r = run_cli("analyze 1 -1 1 --verify");
        CHECK(r.exit_code == 0);
        CHECK(r.output.find("T_E = 2") != std::string::npos);
        CHECK(r.output.find("T_G = 1.5") != std::string::npos);
    }
    SECTION("unphysical state exits 2 and names the eigenvalue") {
        const auto r = run_cli("analyze 0.5 0.4 0.3");
        CHECK(r.exit_code == 2);
        CHECK(r.output.find("lambda_11") != std::string::npos);
        CHECK(r.output.find("-0.05") != std::string::npos);
    }
    SECTION("malformed arguments exit 1") {
        CHECK(run_cli("analyze 0.5 0.4").exit_code == 1);
        CHECK(run_cli("analyze a b c").exit_code == 1);
        CHECK(run_cli("frobnicate").exit_code == 1);
    }
    SECTION("json format") {
        const auto r = run_cli("analyze 0.5 -0.4 0.3 --format json");
        CHECK(r.exit_code == 0);
        CHECK(r.output.find("\"QG\": 0.4") != std::string::npos);
    }
}

TEST_CASE("cli sweep") {
    SECTION("su2 family produces the schema and a single T_E/T_G crossing") {
        const auto r = run_cli("sweep --family su2 --min -1 --max 0.3333333333333333 --steps 200 -o cli_su2.csv");
        REQUIRE(r.exit_code == 0);
        const auto t = qcorr::read_csv("cli_su2.csv");
        CHECK(t.header ==
              std::vector<std::string>{"x", "c1", "c2", "c3", "physical", "QE", "CE", "TE", "QG",
                                       "CG", "TG"});
        REQUIRE(t.rows.size() == 200);
        const int xte = t.require_column("TE"), xtg = t.require_column("TG"),
                  xcol = t.require_column("x");
        int sign_changes = 0;
        double prev = 0.0;
        bool have_prev = false;
        for (const auto& row : t.rows) {
            const double x = std::strtod(row[xcol].c_str(), nullptr);
            const double d = std::strtod(row[xte].c_str(), nullptr) -
                             std::strtod(row[xtg].c_str(), nullptr);
            if (have_prev && prev * d < 0.0) {
                ++sign_changes;
                CHECK(x > -1.0);
                CHECK(x < -0.8);
            }
            prev = d;
            have_prev = true;
        }
        CHECK(sign_changes == 1);
        std::remove("cli_su2.csv");
    }
    SECTION("single point collapses to one row") {
        const auto r = run_cli("sweep --family su2 --min 0 --max 0 --steps 5 -o cli_one.csv");
        REQUIRE(r.exit_code == 0);
        const auto t = qcorr::read_csv("cli_one.csv");
        REQUIRE(t.rows.size() == 1);
        CHECK(std::strtod(t.rows[0][t.require_column("TG")].c_str(), nullptr) == 0.0);
        std::remove("cli_one.csv");
    }
    SECTION("domain violations exit 1") {
        CHECK(run_cli("sweep --family su2 --min -1 --max 0.5 --steps 10").exit_code == 1);
        CHECK(run_cli("sweep --family u1 --min -1 --max 0.5 --steps 10").exit_code == 1);
        CHECK(run_cli("sweep --family nope --min 0 --max 0.1 --steps 10").exit_code == 1);
    }
    SECTION("custom line flags unphysical rows instead of dropping them") {
        const auto r = run_cli(
            "sweep --family custom-line --from 0,0,0 --to 0.9,0.9,0.9 --min 0 --max 1 "
            "--steps 11 -o cli_line.csv");
        REQUIRE(r.exit_code == 0);
        const auto t = qcorr::read_csv("cli_line.csv");
        REQUIRE(t.rows.size() == 11);
        const int pc = t.require_column("physical"), qe = t.require_column("QE");
        int unphysical = 0;
        for (const auto& row : t.rows)
            if (row[pc] == "false") {
                ++unphysical;
                CHECK(row[qe].empty());
            }
        CHECK(unphysical > 0);
        std::remove("cli_line.csv");
    }
    SECTION("u1 family, 381 steps: T_G kinks at +-0.45 and C_G constant 0.9") {
        const auto r =
            run_cli("sweep --family u1 --min -0.95 --max 0.95 --steps 381 -o cli_u1.csv");
        REQUIRE(r.exit_code == 0);
        const auto t = qcorr::read_csv("cli_u1.csv");
        REQUIRE(t.rows.size() == 381);
        const int xc = t.require_column("x"), tg = t.require_column("TG"),
                  cg = t.require_column("CG");
        const double h = 1.9 / 380.0;
        std::vector<double> xs, tgs;
        for (const auto& row : t.rows) {
            xs.push_back(std::strtod(row[xc].c_str(), nullptr));
            tgs.push_back(std::strtod(row[tg].c_str(), nullptr));
            const double x = xs.back();
            if (std::fabs(x) <= 0.9)
                CHECK(std::strtod(row[cg].c_str(), nullptr) == Approx(0.9).margin(1e-10));
        }
        std::vector<double> kinks;
        for (std::size_t i = 1; i + 1 < tgs.size(); ++i) {
            const double d2 = tgs[i + 1] - 2.0 * tgs[i] + tgs[i - 1];
            if (std::fabs(d2) > 0.1 * h) kinks.push_back(xs[i]);
        }
        REQUIRE(kinks.size() == 2);
        CHECK(std::fabs(std::fabs(kinks[0]) - 0.45) <= h);
        CHECK(std::fabs(std::fabs(kinks[1]) - 0.45) <= h);
        std::remove("cli_u1.csv");
    }
    SECTION("round trip: csv re-read for plotting matches to 1e-10") {
        const auto r = run_cli("sweep --family u1 --min -0.9 --max 0.9 --steps 13 -o cli_rt.csv");
        REQUIRE(r.exit_code == 0);
        const auto t = qcorr::read_csv("cli_rt.csv");
        const int xc = t.require_column("x"), tg = t.require_column("TG");
        for (std::size_t i = 0; i < t.rows.size(); ++i) {
            const double x = -0.9 + 1.8 * static_cast<double>(i) / 12.0;
            const double tg_read = std::strtod(t.rows[i][tg].c_str(), nullptr);
            CHECK(std::fabs(std::strtod(t.rows[i][xc].c_str(), nullptr) - x) < 1e-10);
            // recompute T_G from the re-parsed x
            const double expect = 0.5 * (0.9 + std::max(0.9, 2.0 * std::fabs(x)));
            CHECK(std::fabs(tg_read - expect) < 1e-10);
        }
        std::remove("cli_rt.csv");
    }
}

TEST_CASE("cli xxz") {
    SECTION("polarized plateau with empty transition list") {
        const auto r = run_cli("xxz -L 6 --min 1.1 --max 2.0 --steps 10 -o cli_xxz.csv");
        REQUIRE(r.exit_code == 0);
        CHECK(r.output.find("transitions: 0") != std::string::npos);
        const auto t = qcorr::read_csv("cli_xxz.csv");
        REQUIRE(t.rows.size() == 10);
        const int qg = t.require_column("QG"), cg = t.require_column("CG"),
                  tg = t.require_column("TG"), st = t.require_column("status");
        for (const auto& row : t.rows) {
            CHECK(row[st] == "ok");
            CHECK(std::fabs(std::strtod(row[qg].c_str(), nullptr)) < 1e-10);
            CHECK(std::strtod(row[cg].c_str(), nullptr) == Approx(1.0).margin(1e-10));
            CHECK(std::strtod(row[tg].c_str(), nullptr) == Approx(1.0).margin(1e-10));
        }
        std::remove("cli_xxz.csv");
    }
    SECTION("first-order flag near Delta = 1") {
        const auto r = run_cli("xxz -L 6 --min 0.8 --max 1.2 --steps 21 -o cli_xxz2.csv");
        REQUIRE(r.exit_code == 0);
        CHECK(r.output.find("first_order at delta = 1") != std::string::npos);
        std::remove("cli_xxz2.csv");
    }
    SECTION("invalid length exits 1") {
        CHECK(run_cli("xxz -L 5 --min 0 --max 1 --steps 5").exit_code == 1);
    }
    SECTION("worker count does not change the output") {
        const auto one = run_cli("xxz -L 6 --min -0.4 --max 0.4 --steps 6 --threads 1 -o cli_t1.csv");
        REQUIRE(one.exit_code == 0);
        RunResult four;
        {   // QCORR_THREADS env var overrides the flag
            const std::string cmd = std::string("QCORR_THREADS=4 ") + QCORR_CLI_PATH +
                                    " xxz -L 6 --min -0.4 --max 0.4 --steps 6 --threads 1 "
                                    "-o cli_t4.csv 2>&1";
            FILE* pipe = popen(cmd.c_str(), "r");
            REQUIRE(pipe != nullptr);
            std::array<char, 4096> buf;
            while (std::size_t got = std::fread(buf.data(), 1, buf.size(), pipe))
                four.output.append(buf.data(), got);
            four.exit_code = WEXITSTATUS(pclose(pipe));
        }
        REQUIRE(four.exit_code == 0);
        CHECK(slurp("cli_t1.csv") == slurp("cli_t4.csv"));
        std::remove("cli_t1.csv");
        std::remove("cli_t4.csv");
    }
    SECTION("strangled solver exits 3 but writes per-row status") {
        const auto r = run_cli(
            "xxz -L 10 --min 0.2 --max 0.4 --steps 5 --dense-cutoff 2 --lanczos-max-iter 2 "
            "-o cli_xxz3.csv");
        CHECK(r.exit_code == 3);
        const auto t = qcorr::read_csv("cli_xxz3.csv");
        REQUIRE(t.rows.size() == 5);
        const int st = t.require_column("status");
        for (const auto& row : t.rows) CHECK(row[st].find("error") == 0);
        std::remove("cli_xxz3.csv");
    }
}

TEST_CASE("cli verify") {
    SECTION("clean run passes, exits 0, and is byte-identical across runs") {
        const auto a = run_cli("verify --seed 3 --count 400 -o cli_verify_a.json");
        const auto b = run_cli("verify --seed 3 --count 400 -o cli_verify_b.json");
        CHECK(a.exit_code == 0);
        CHECK(b.exit_code == 0);
        const auto ja = slurp("cli_verify_a.json");
        CHECK(!ja.empty());
        CHECK(ja == slurp("cli_verify_b.json"));
        CHECK(ja.find("\"tg_dual_path\"") != std::string::npos);
        CHECK(ja.find("\"failed\": 0") != std::string::npos);
        std::remove("cli_verify_a.json");
        std::remove("cli_verify_b.json");
    }
    SECTION("injected fault trips the T_G suite and exits 4") {
        const auto r = run_cli("verify --seed 3 --count 400 --inject-fault tg-flip-max");
        CHECK(r.exit_code == 4);
        CHECK(r.output.find("\"tg_dual_path\"") != std::string::npos);
        CHECK(r.output.find("\"first_failure_state\": [") != std::string::npos);
    }
    SECTION("unknown fault name exits 1") {
        CHECK(run_cli("verify --count 10 --inject-fault frobnicate").exit_code == 1);
    }
}

TEST_CASE("cli plot") {
    const auto sweep = run_cli("sweep --family su2 --min -1 --max 0.33 --steps 40 -o cli_plot.csv");
    REQUIRE(sweep.exit_code == 0);

    SECTION("two series from a sweep") {
        const auto r = run_cli("plot --input cli_plot.csv --x x --y TE,TG -o cli_plot.svg");
        CHECK(r.exit_code == 0);
        const auto svg = slurp("cli_plot.svg");
        CHECK(svg.find("viewBox=\"0 0 800 600\"") != std::string::npos);
        std::size_t polylines = 0, pos = 0;
        while ((pos = svg.find("<polyline", pos)) != std::string::npos) {
            ++polylines;
            ++pos;
        }
        CHECK(polylines == 2);
        std::remove("cli_plot.svg");
    }
    SECTION("missing column exits 1") {
        CHECK(run_cli("plot --input cli_plot.csv --x x --y NOPE -o cli_plot2.svg").exit_code == 1);
    }
    SECTION("missing file exits 1") {
        CHECK(run_cli("plot --input does_not_exist.csv --x x --y TE -o cli_plot3.svg").exit_code ==
              1);
    }
    std::remove("cli_plot.csv");
}

TEST_CASE("cli config file precedence") {
    {
        std::ofstream cfg("cli_cfg.ini");
        cfg << "[verify]\ncount=123\nseed=9\n";
    }
    SECTION("config value applies when no flag is given") {
        const auto r = run_cli("verify --config cli_cfg.ini -o cli_cfg.json");
        CHECK(r.exit_code == 0);
        CHECK(slurp("cli_cfg.json").find("\"checked\": 123") != std::string::npos);
        std::remove("cli_cfg.json");
    }
    SECTION("flag wins over config value") {
        const auto r = run_cli("verify --config cli_cfg.ini --count 200 -o cli_cfg.json");
        CHECK(r.exit_code == 0);
        CHECK(slurp("cli_cfg.json").find("\"checked\": 200") != std::string::npos);
        std::remove("cli_cfg.json");
    }
    std::remove("cli_cfg.ini");
}
