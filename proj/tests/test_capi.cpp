#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cstring>
#include <string>
#include <vector>

#include "sbcode.h"

namespace {

std::string take(char* s) {
  std::string out = s == nullptr ? std::string() : std::string(s);
  sbcode_string_free(s);
  return out;
}

}  // namespace

TEST_CASE("code handles") {
  sbcode_code* code = nullptr;
  REQUIRE(sbcode_code_create_frc(4, 2, &code) == SBCODE_OK);
  int64_t k = 0;
  int64_t s = 0;
  CHECK(sbcode_code_dims(code, &k, &s) == SBCODE_OK);
  CHECK(k == 4);
  CHECK(s == 2);
  double entry = -1.0;
  CHECK(sbcode_code_entry(code, 0, 1, &entry) == SBCODE_OK);
  CHECK(entry == 1.0);
  CHECK(sbcode_code_entry(code, 0, 2, &entry) == SBCODE_OK);
  CHECK(entry == 0.0);
  CHECK(sbcode_code_entry(code, 4, 0, &entry) ==
        SBCODE_ERROR_INVALID_ARGUMENT);

  char* csv = nullptr;
  REQUIRE(sbcode_code_csv(code, &csv) == SBCODE_OK);
  CHECK(take(csv) == "1,1,0,0\n1,1,0,0\n0,0,1,1\n0,0,1,1\n");
  sbcode_code_destroy(code);
}

TEST_CASE("invalid construction reports an error message") {
  sbcode_code* code = nullptr;
  CHECK(sbcode_code_create_sbc(10, 2, 0.3, 0.5, 0, &code) ==
        SBCODE_ERROR_INVALID_ARGUMENT);
  CHECK(std::strlen(sbcode_last_error()) > 0);
  CHECK(sbcode_code_create_bgc(10, 2, 1.5, 0, &code) ==
        SBCODE_ERROR_INVALID_ARGUMENT);
}

TEST_CASE("sbc and bgc agree through the C API when p equals q") {
  sbcode_code* sbc = nullptr;
  sbcode_code* bgc = nullptr;
  REQUIRE(sbcode_code_create_sbc(12, 3, 0.4, 0.4, 9, &sbc) == SBCODE_OK);
  REQUIRE(sbcode_code_create_bgc(12, 3, 0.4, 9, &bgc) == SBCODE_OK);
  char* a = nullptr;
  char* b = nullptr;
  REQUIRE(sbcode_code_csv(sbc, &a) == SBCODE_OK);
  REQUIRE(sbcode_code_csv(bgc, &b) == SBCODE_OK);
  CHECK(take(a) == take(b));
  sbcode_code_destroy(sbc);
  sbcode_code_destroy(bgc);
}

TEST_CASE("helpers") {
  double q = -1.0;
  REQUIRE(sbcode_matched_q(100, 10, 0.9, &q) == SBCODE_OK);
  CHECK(q == doctest::Approx(1.0 / 90.0).epsilon(1e-12));
  CHECK(sbcode_matched_q(10, 10, 0.9, &q) == SBCODE_ERROR_INVALID_ARGUMENT);

  double w = 0.0;
  REQUIRE(sbcode_expected_column_weight(100, 10, 0.5, 0.05, &w) == SBCODE_OK);
  CHECK(w == doctest::Approx(9.5).epsilon(1e-12));

  int64_t r = 0;
  REQUIRE(sbcode_r_from_epsilon(100, 0.2, &r) == SBCODE_OK);
  CHECK(r == 80);
}

TEST_CASE("patterns and decoding") {
  sbcode_code* code = nullptr;
  REQUIRE(sbcode_code_create_frc(20, 5, &code) == SBCODE_OK);

  sbcode_pattern* blocks = nullptr;
  REQUIRE(sbcode_pattern_blocks(20, 5, 15, &blocks) == SBCODE_OK);
  int64_t r = 0;
  CHECK(sbcode_pattern_size(blocks, &r) == SBCODE_OK);
  CHECK(r == 15);
  std::vector<int64_t> idx(15);
  REQUIRE(sbcode_pattern_indices(blocks, idx.data(), 15) == SBCODE_OK);
  CHECK(idx.front() == 5);
  CHECK(sbcode_pattern_indices(blocks, idx.data(), 3) ==
        SBCODE_ERROR_INVALID_ARGUMENT);
  char* pj = nullptr;
  REQUIRE(sbcode_pattern_json(blocks, &pj) == SBCODE_OK);
  const auto parsed = nlohmann::json::parse(take(pj));
  CHECK(parsed.is_array());
  CHECK(parsed.size() == 15);

  sbcode_decoding* decoding = nullptr;
  REQUIRE(sbcode_decode(code, blocks, "OPTIMAL", 0, &decoding) == SBCODE_OK);
  double e = -1.0;
  REQUIRE(sbcode_decoding_err(code, decoding, &e) == SBCODE_OK);
  CHECK(e == doctest::Approx(5.0).epsilon(1e-9));  // k - r on the FRC
  double beta = 0.0;
  CHECK(sbcode_decoding_beta(decoding, &beta) == SBCODE_OK);
  CHECK(beta == 1.0);
  char* dj = nullptr;
  REQUIRE(sbcode_decoding_json(decoding, &dj) == SBCODE_OK);
  CHECK(nlohmann::json::parse(take(dj))["decoder"] == "OPTIMAL");
  sbcode_decoding_destroy(decoding);

  CHECK(sbcode_decode(code, blocks, "NOPE", 0, &decoding) ==
        SBCODE_ERROR_INVALID_ARGUMENT);

  sbcode_pattern* random = nullptr;
  REQUIRE(sbcode_pattern_random(20, 10, 7, &random) == SBCODE_OK);
  sbcode_pattern* greedy = nullptr;
  REQUIRE(sbcode_pattern_greedy(code, 15, &greedy) == SBCODE_OK);
  sbcode_pattern* spectral = nullptr;
  REQUIRE(sbcode_pattern_spectral(code, 3, 15, &spectral) == SBCODE_OK);

  sbcode_pattern_destroy(blocks);
  sbcode_pattern_destroy(random);
  sbcode_pattern_destroy(greedy);
  sbcode_pattern_destroy(spectral);
  sbcode_code_destroy(code);
}

TEST_CASE("bruteforce guard surfaces as a resource-limit status") {
  sbcode_code* code = nullptr;
  REQUIRE(sbcode_code_create_frc(30, 5, &code) == SBCODE_OK);
  sbcode_pattern* pattern = nullptr;
  CHECK(sbcode_pattern_bruteforce(code, 15, &pattern) ==
        SBCODE_ERROR_RESOURCE_LIMIT);
  sbcode_code_destroy(code);
}

TEST_CASE("bounds JSON") {
  char* out = nullptr;
  REQUIRE(sbcode_bounds_json(100, 10, 1.0, 0.0, 80, &out) == SBCODE_OK);
  const auto j = nlohmann::json::parse(take(out));
  CHECK(j["gamma"] == 0.0);
  bool saw_theorem1 = false;
  for (const auto& b : j["bounds"]) {
    if (b["name"] == "theorem1") {
      saw_theorem1 = true;
      CHECK(b["value"] == 0.0);
    }
    if (b["name"] == "corollary2_bgc") {
      CHECK(b["value"] == 0.0);
    }
  }
  CHECK(saw_theorem1);
  CHECK(j.contains("lemma1_nonempty_prob"));
  CHECK(j["predicates"].contains("exact_recovery_impossible"));
}

TEST_CASE("sweep, plot, simulate, attack and gd-demo commands") {
  const char* config = R"({
    "k": 20, "s_values": [5], "p_values": [0.9, 1.0],
    "epsilon_values": [0.1, 0.2], "trials": 5,
    "decoders": ["STOCHASTIC_BLOCK"], "straggler_model": "random",
    "master_seed": 42, "q_rule": "MATCHED"
  })";
  char* csv = nullptr;
  REQUIRE(sbcode_sweep_csv(config, 0, 1, &csv) == SBCODE_OK);
  const std::string csv_text = take(csv);
  CHECK(csv_text.rfind("family,", 0) == 0);

  char* svg = nullptr;
  REQUIRE(sbcode_plot_svg(csv_text.c_str(), &svg) == SBCODE_OK);
  const std::string svg_text = take(svg);
  CHECK(svg_text.find("<svg") != std::string::npos);
  CHECK(svg_text.find("s = 5") != std::string::npos);

  CHECK(sbcode_plot_svg("family,k\n", &svg) == SBCODE_ERROR_INVALID_ARGUMENT);
  CHECK(std::string(sbcode_last_error()).find("missing columns") !=
        std::string::npos);

  char* sim = nullptr;
  REQUIRE(sbcode_simulate_json(20, 5, 1.0, 0.0, "STOCHASTIC_BLOCK", 16, 25, 1,
                               &sim) == SBCODE_OK);
  const auto sim_json = nlohmann::json::parse(take(sim));
  CHECK(sim_json["trials"] == 25);
  CHECK(sim_json["mean_err"].get<double>() >= 0.0);

  char* attack_json = nullptr;
  char* attack_csv = nullptr;
  REQUIRE(sbcode_attack_json(20, 5, 1.0, 0.0, 15, "blocks", 4, 1,
                             &attack_json, &attack_csv) == SBCODE_OK);
  const auto aj = nlohmann::json::parse(take(attack_json));
  CHECK(aj["mean_err"] == doctest::Approx(5.0).epsilon(1e-9));
  const std::string ac = take(attack_csv);
  CHECK(ac.rfind("trial,err\n", 0) == 0);

  char* gd = nullptr;
  REQUIRE(sbcode_gd_demo_json(16, 4, 1.0, 0.0, 0.25, 10, 2, &gd) == SBCODE_OK);
  const auto gj = nlohmann::json::parse(take(gd));
  CHECK(gj["steps"] == 10);
  CHECK(gj["objective_full"].size() == 11);
}

TEST_CASE("null arguments are rejected") {
  CHECK(sbcode_code_create_frc(4, 2, nullptr) ==
        SBCODE_ERROR_INVALID_ARGUMENT);
  CHECK(sbcode_pattern_random(4, 2, 0, nullptr) ==
        SBCODE_ERROR_INVALID_ARGUMENT);
  CHECK(sbcode_bounds_json(4, 2, 1.0, 0.0, -1, nullptr) ==
        SBCODE_ERROR_INVALID_ARGUMENT);
  CHECK(std::string(sbcode_status_name(SBCODE_ERROR_IO)) == "io error");
  CHECK(std::string(sbcode_version()).size() > 0);
}
