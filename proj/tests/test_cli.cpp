#include <catch2/catch_amalgamated.hpp>

#include "support/test_support.hpp"

using namespace prlqual;
using namespace testsupport;

namespace {

constexpr const char* kWorkedTuple =
    "(PRL=4, PRS=68, S=(78, 83, 62, 70, 55), theta=65, delta=(60, 60, 60, 50, 40))";

// Worked asset plus its profile file; returns the asset root.
struct CliFixture {
  ScratchDir dir;
  fs::path asset;
  fs::path profile;
  fs::path registry;

  CliFixture() {
    asset = dir.path() / "asset";
    profile = dir.path() / "worked-profile.json";
    registry = dir.path() / "registry";
    write_worked_asset(asset);
    write_worked_profile_file(profile);
  }

  std::vector<std::string> qualify_args(std::initializer_list<std::string> extra = {}) const {
    std::vector<std::string> args = {"--profile", profile.string(), "--now", kWorkedInstant,
                                     "qualify",   asset.string()};
    args.insert(args.end(), extra.begin(), extra.end());
    return args;
  }
};

}  // namespace

TEST_CASE("init scaffolds an asset that validates cleanly", "[cli]") {
  ScratchDir dir;
  fs::path root = dir.path() / "fresh";

  CliResult init = run_cli({"init", root.string(), "--id", "demo-asset"}, dir.path());
  CHECK(init.exit_code == 0);
  CHECK(init.out.find("demo-asset") != std::string::npos);
  CHECK(fs::exists(root / "prompt_asset.json"));

  CliResult validate = run_cli({"--format", "json", "validate", root.string()}, dir.path());
  CHECK(validate.exit_code == 0);
  json report = json::parse(validate.out);
  CHECK(report["valid"] == true);
  CHECK(report["findings"].empty());

  SECTION("scoring an evidence-less scaffold is degraded but legal") {
    CliResult score = run_cli({"--format", "json", "score", root.string()}, dir.path());
    CHECK(score.exit_code == 0);
    json summary = json::parse(score.out);
    CHECK(summary["batch_count"] == 0);
    CHECK(summary["degraded"] == true);
  }
  SECTION("a second init refuses to overwrite") {
    CliResult again = run_cli({"init", root.string(), "--id", "demo-asset"}, dir.path());
    CHECK(again.exit_code == 3);
  }
  SECTION("a bad asset id is a usage error") {
    CliResult bad = run_cli({"init", (dir.path() / "x").string(), "--id", "Bad Id"}, dir.path());
    CHECK(bad.exit_code == 2);
  }
}

TEST_CASE("qualify renders the worked tuple byte for byte", "[cli]") {
  CliFixture fx;
  CliResult r = run_cli(fx.qualify_args(), fx.dir.path());
  // default format json carries the tuple as a field
  CHECK(r.exit_code == 0);
  CHECK(json::parse(r.out)["tuple"] == kWorkedTuple);

  std::vector<std::string> args = fx.qualify_args();
  args.insert(args.begin(), {"--format", "tuple"});
  CliResult tuple = run_cli(args, fx.dir.path());
  CHECK(tuple.exit_code == 0);
  CHECK(tuple.out == std::string(kWorkedTuple) + "\n");
}

TEST_CASE("qualify reports labels from profile, matrix, and deviations", "[cli]") {
  CliFixture fx;

  SECTION("custom profile without documentation is unlabeled") {
    CliResult r = run_cli(fx.qualify_args(), fx.dir.path());
    json j = json::parse(r.out);
    CHECK(j["label"]["kind"] == "unlabeled");
    CHECK(j["label"]["cited_version"] == "PRL/PRS v1.0");
    CHECK(j["prs"] == 68.0);
    CHECK(j["effective_level"] == 4);
    CHECK(j["deviations"].empty());
  }
  SECTION("documented deviations make it compatible") {
    CliResult r = run_cli(fx.qualify_args({"--deviation", "weights tuned for fixture"}),
                          fx.dir.path());
    json j = json::parse(r.out);
    CHECK(j["label"]["kind"] == "prl_compatible");
    CHECK(j["deviations"].size() == 1);
  }
  SECTION("the embedded profile and matrix are conformant") {
    CliResult r = run_cli({"--now", kWorkedInstant, "qualify", fx.asset.string()},
                          fx.dir.path());
    json j = json::parse(r.out);
    CHECK(j["label"]["kind"] == "prl_conformant");
    CHECK(j["prs"] == 69.6);
    CHECK(j["profile_id"] == "canonical-v1");
  }
  SECTION("markdown format carries the attribution sentence") {
    std::vector<std::string> args = fx.qualify_args();
    args.insert(args.begin(), {"--format", "markdown"});
    CliResult r = run_cli(args, fx.dir.path());
    CHECK(r.out.find("# Prompt Readiness Report") == 0);
    CHECK(r.out.find("Prompt Readiness Levels (PRL) & Prompt Readiness Score (PRS)") !=
          std::string::npos);
  }
  SECTION("--out writes the report to a file instead of stdout") {
    fs::path out = fx.dir.path() / "report.json";
    CliResult r = run_cli(fx.qualify_args({"--out", out.string()}), fx.dir.path());
    CHECK(r.exit_code == 0);
    CHECK(r.out.empty());
    CHECK(json::parse(read_file(out))["tuple"] == kWorkedTuple);
  }
}

TEST_CASE("exit codes separate gate, validation, and environment failures", "[cli]") {
  CliFixture fx;

  SECTION("a valid asset validates with 0") {
    CHECK(run_cli({"validate", fx.asset.string()}, fx.dir.path()).exit_code == 0);
  }
  SECTION("a broken asset is a validation failure with findings on stderr") {
    fs::remove(fx.asset / "prompt/template.md");
    CliResult r = run_cli(fx.qualify_args(), fx.dir.path());
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("MISSING_FILE") != std::string::npos);
    CHECK(r.out.empty());
  }
  SECTION("tampered evidence is a validation failure") {
    write_file(fx.asset / "evidence/feasibility_report.md", "edited after indexing\n");
    CliResult r = run_cli(fx.qualify_args(), fx.dir.path());
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("DIGEST_MISMATCH") != std::string::npos);
  }
  SECTION("a missing asset directory is an environment failure") {
    CliResult r = run_cli({"qualify", (fx.dir.path() / "nowhere").string()}, fx.dir.path());
    CHECK(r.exit_code == 3);
  }
  SECTION("a malformed manifest is a validation failure") {
    write_file(fx.asset / "prompt_asset.json", "{broken");
    CliResult r = run_cli({"validate", fx.asset.string()}, fx.dir.path());
    CHECK(r.exit_code == 2);
  }
  SECTION("a bad --now value is a usage error") {
    CliResult r = run_cli({"--now", "yesterday", "validate", fx.asset.string()},
                          fx.dir.path());
    CHECK(r.exit_code == 2);
  }
  SECTION("an unknown format is a usage error") {
    CliResult r = run_cli({"--format", "yaml", "validate", fx.asset.string()}, fx.dir.path());
    CHECK(r.exit_code == 2);
  }
  SECTION("a held registry lock is an environment failure") {
    fs::create_directories(fx.registry);
    write_file(fx.registry / ".lock", "{\"acquired_at\":\"2026-03-02T08:59:00Z\",\"pid\":1}\n");
    CliResult r = run_cli(fx.qualify_args({"--record", "--registry", fx.registry.string()}),
                          fx.dir.path());
    CHECK(r.exit_code == 3);
    CHECK(r.err.find("LockHeld") != std::string::npos);
  }
}

TEST_CASE("gate passes and fails with the documented codes", "[cli]") {
  CliFixture fx;
  std::vector<std::string> base = {"--profile", fx.profile.string(), "--now", kWorkedInstant,
                                   "gate",      fx.asset.string()};

  SECTION("an achieved target exits 0 and prints the tuple") {
    std::vector<std::string> args = base;
    args.push_back("4");
    CliResult r = run_cli(args, fx.dir.path());
    CHECK(r.exit_code == 0);
    CHECK(r.out == std::string(kWorkedTuple) + "\n");
  }
  SECTION("a missed target exits 1 and prints the improvement frontier") {
    std::vector<std::string> args = base;
    args.push_back("5");
    CliResult r = run_cli(args, fx.dir.path());
    CHECK(r.exit_code == 1);
    CHECK(r.out.find(kWorkedTuple) == 0);
    CHECK(r.out.find("Improvement frontier for level 5:") != std::string::npos);
    CHECK(r.out.find("- PRS: +4 (threshold 72)") != std::string::npos);
    CHECK(r.out.find("- C (compliance, safety & alignment): +3 (minimum 65)") !=
          std::string::npos);
    CHECK(r.out.find("- evidence: level 4 caps the claim; missing: optimization_matrix "
                     "token_efficiency_analysis variance_stability_report") !=
          std::string::npos);
  }
  SECTION("a target outside 1..9 is a usage error") {
    std::vector<std::string> args = base;
    args.push_back("0");
    CHECK(run_cli(args, fx.dir.path()).exit_code == 2);
    args.back() = "10";
    CHECK(run_cli(args, fx.dir.path()).exit_code == 2);
  }
}

TEST_CASE("fixed clocks make output reproducible", "[cli]") {
  CliFixture fx;

  CliResult first = run_cli(fx.qualify_args(), fx.dir.path());
  CliResult second = run_cli(fx.qualify_args(), fx.dir.path());
  CHECK(first.exit_code == 0);
  CHECK(first.out == second.out);

  SECTION("recorded registries are byte-identical too") {
    fs::path reg_a = fx.dir.path() / "reg-a";
    fs::path reg_b = fx.dir.path() / "reg-b";
    CliResult a =
        run_cli(fx.qualify_args({"--record", "--registry", reg_a.string()}), fx.dir.path());
    CliResult b =
        run_cli(fx.qualify_args({"--record", "--registry", reg_b.string()}), fx.dir.path());
    CHECK(a.exit_code == 0);
    CHECK(b.exit_code == 0);
    CHECK(read_file(reg_a / "records.jsonl") == read_file(reg_b / "records.jsonl"));
    CHECK(a.err.find("recorded seq 0") != std::string::npos);
  }
}

TEST_CASE("whatif sweeps one parameter and reports per-step outcomes", "[cli]") {
  CliFixture fx;
  std::vector<std::string> base = {"--profile", fx.profile.string(), "--now", kWorkedInstant};

  SECTION("lambda has no effect on a zero-variance asset") {
    std::vector<std::string> args = base;
    args.insert(args.end(), {"--format", "tuple", "whatif", fx.asset.string(), "--sweep",
                             "lambda=0:0.1:5"});
    CliResult r = run_cli(args, fx.dir.path());
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("value\tprs\tscore_level\n") == 0);
    std::size_t rows = 0;
    for (std::size_t pos = r.out.find('\n') + 1; pos < r.out.size();
         pos = r.out.find('\n', pos) + 1) {
      std::size_t line_end = r.out.find('\n', pos);
      std::string line = r.out.substr(pos, line_end - pos);
      CHECK(line.substr(line.find('\t') + 1) == "68\t4");
      ++rows;
    }
    CHECK(rows == 5);
  }
  SECTION("shifting weight onto the weakest dimension lowers the score") {
    std::vector<std::string> args = base;
    args.insert(args.end(),
                {"whatif", fx.asset.string(), "--sweep", "weight.O=0.1:0.6:6"});
    CliResult r = run_cli(args, fx.dir.path());
    CHECK(r.exit_code == 0);
    json j = json::parse(r.out);
    CHECK(j["parameter"] == "weight.O");
    REQUIRE(j["rows"].size() == 6);
    double previous = 101.0;
    for (const json& row : j["rows"]) {
      double prs = row["prs"].get<double>();
      CHECK(prs < previous);
      previous = prs;
    }
  }
  SECTION("sweep rows can change the assigned level") {
    std::vector<std::string> args = base;
    args.insert(args.end(),
                {"whatif", fx.asset.string(), "--sweep", "offset=0:10:2"});
    CliResult r = run_cli(args, fx.dir.path());
    json j = json::parse(r.out);
    REQUIRE(j["rows"].size() == 2);
    CHECK(j["rows"][0]["score_level"] == 4);   // unshifted ladder
    CHECK(j["rows"][1]["score_level"] == 3);   // theta_4 moves to 75 > 68
  }
  SECTION("malformed sweeps are usage errors") {
    for (const char* sweep : {"lambda=0:0.1:0", "lambda=0:0.1", "lambda=a:b:3",
                              "weight.X=0:1:3", "theta=0:1:3", "lambda=0:0.1:2000"}) {
      std::vector<std::string> args = base;
      args.insert(args.end(), {"whatif", fx.asset.string(), "--sweep", sweep});
      INFO("sweep " << sweep);
      CHECK(run_cli(args, fx.dir.path()).exit_code == 2);
    }
  }
}

TEST_CASE("registry subcommands list, filter, verify, and re-render", "[cli]") {
  CliFixture fx;
  CliResult recorded =
      run_cli(fx.qualify_args({"--record", "--registry", fx.registry.string()}), fx.dir.path());
  REQUIRE(recorded.exit_code == 0);
  CliResult recorded_again =
      run_cli(fx.qualify_args({"--record", "--registry", fx.registry.string()}), fx.dir.path());
  REQUIRE(recorded_again.exit_code == 0);

  std::vector<std::string> reg = {"--registry", fx.registry.string()};

  SECTION("list shows every record") {
    std::vector<std::string> args = reg;
    args.insert(args.end(), {"--format", "json", "registry", "list"});
    CliResult r = run_cli(args, fx.dir.path());
    CHECK(r.exit_code == 0);
    json j = json::parse(r.out);
    REQUIRE(j.size() == 2);
    CHECK(j[0]["record_seq"] == 0);
    CHECK(j[1]["record_seq"] == 1);
    CHECK(j[1]["prev_hash"] == j[0]["record_hash"]);
  }
  SECTION("history filters by asset") {
    std::vector<std::string> args = reg;
    args.insert(args.end(), {"--format", "tuple", "registry", "history", "triage-bot"});
    CliResult r = run_cli(args, fx.dir.path());
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("seq\tasset\tversion\tlevel\tprs\trecorded_at\n") == 0);
    CHECK(r.out.find("0\ttriage-bot\t1.2.0\t4\t68\t2026-03-02T09:00:00Z") != std::string::npos);

    std::vector<std::string> other = reg;
    other.insert(other.end(), {"--format", "tuple", "registry", "history", "other-asset"});
    CliResult none = run_cli(other, fx.dir.path());
    CHECK(none.exit_code == 0);
    CHECK(none.out == "seq\tasset\tversion\tlevel\tprs\trecorded_at\n");

    std::vector<std::string> as_json = reg;
    as_json.insert(as_json.end(), {"registry", "history", "triage-bot"});
    CliResult jr = run_cli(as_json, fx.dir.path());
    CHECK(jr.exit_code == 0);
    json parsed = json::parse(jr.out);
    REQUIRE(parsed.size() == 2);
    for (const auto& rec : parsed) CHECK(rec["asset_id"] == "triage-bot");
  }
  SECTION("verify reports an intact chain") {
    std::vector<std::string> args = reg;
    args.insert(args.end(), {"registry", "verify"});
    CliResult r = run_cli(args, fx.dir.path());
    CHECK(r.exit_code == 0);
    CHECK(r.out == "registry intact: 2 record(s)\n");
  }
  SECTION("verify flags a corrupted file with exit 2") {
    std::string bytes = read_file(fx.registry / "records.jsonl");
    bytes[bytes.size() / 2] ^= 0x4;
    write_file(fx.registry / "records.jsonl", bytes);
    std::vector<std::string> args = reg;
    args.insert(args.end(), {"registry", "verify"});
    CliResult r = run_cli(args, fx.dir.path());
    CHECK(r.exit_code == 2);
    CHECK_FALSE(r.out.empty());
  }
  SECTION("report re-renders the stored result") {
    std::vector<std::string> args = reg;
    args.insert(args.end(), {"--format", "tuple", "--now", kWorkedInstant, "report",
                             "triage-bot"});
    CliResult r = run_cli(args, fx.dir.path());
    CHECK(r.exit_code == 0);
    CHECK(r.out == std::string(kWorkedTuple) + "\n");

    std::vector<std::string> by_seq = reg;
    by_seq.insert(by_seq.end(), {"--format", "tuple", "--now", kWorkedInstant, "report",
                                 "triage-bot", "--seq", "0"});
    CHECK(run_cli(by_seq, fx.dir.path()).out == std::string(kWorkedTuple) + "\n");

    std::vector<std::string> missing_seq = reg;
    missing_seq.insert(missing_seq.end(), {"report", "triage-bot", "--seq", "99"});
    CHECK(run_cli(missing_seq, fx.dir.path()).exit_code == 2);

    std::vector<std::string> unknown = reg;
    unknown.insert(unknown.end(), {"report", "other-asset"});
    CHECK(run_cli(unknown, fx.dir.path()).exit_code == 2);
  }
  SECTION("report refuses a corrupt registry") {
    std::string bytes = read_file(fx.registry / "records.jsonl");
    bytes[10] ^= 0x4;
    write_file(fx.registry / "records.jsonl", bytes);
    std::vector<std::string> args = reg;
    args.insert(args.end(), {"report", "triage-bot"});
    CliResult r = run_cli(args, fx.dir.path());
    CHECK(r.exit_code == 2);
  }
}

TEST_CASE("profile subcommands emit and check threshold files", "[cli]") {
  ScratchDir dir;
  fs::path file = dir.path() / "profile.json";

  CliResult init = run_cli({"profile", "init", "--out", file.string()}, dir.path());
  CHECK(init.exit_code == 0);
  json j = json::parse(read_file(file));
  CHECK(j["profile_id"] == "canonical-v1");
  CHECK(j["canonical"] == true);
  REQUIRE(j["levels"].size() == 9);
  CHECK(j["levels"][3]["theta"] == 65.0);

  SECTION("the emitted profile validates as canonical") {
    CliResult r = run_cli({"profile", "validate", file.string()}, dir.path());
    CHECK(r.exit_code == 0);
    CHECK(r.out == "profile 'canonical-v1' is valid (canonical)\n");
  }
  SECTION("a broken ladder is rejected") {
    j["levels"][5]["theta"] = 10.0;
    write_file(file, canonical_pretty(j));
    CliResult r = run_cli({"profile", "validate", file.string()}, dir.path());
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("NonMonotoneThresholds") != std::string::npos);
  }
  SECTION("a missing profile file is an environment failure") {
    CliResult r = run_cli({"profile", "validate", (dir.path() / "gone.json").string()},
                          dir.path());
    CHECK(r.exit_code == 3);
  }
}

TEST_CASE("PRL_PROFILE supplies the profile when no flag is given", "[cli]") {
  CliFixture fx;

  CliResult via_env = run_cli({"--format", "tuple", "--now", kWorkedInstant, "qualify",
                               fx.asset.string()},
                              fx.dir.path(), {{"PRL_PROFILE", fx.profile.string()}});
  CHECK(via_env.exit_code == 0);
  CHECK(via_env.out == std::string(kWorkedTuple) + "\n");

  SECTION("an explicit --profile flag wins over the environment") {
    fs::path canonical_file = fx.dir.path() / "canonical.json";
    run_cli({"profile", "init", "--out", canonical_file.string()}, fx.dir.path());
    CliResult r = run_cli({"--profile", canonical_file.string(), "--format", "tuple", "--now",
                           kWorkedInstant, "qualify", fx.asset.string()},
                          fx.dir.path(), {{"PRL_PROFILE", fx.profile.string()}});
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("PRS=69.6") != std::string::npos);
  }
}

TEST_CASE("score renders summaries in all three formats", "[cli]") {
  CliFixture fx;
  std::vector<std::string> base = {"--profile", fx.profile.string(), "--now", kWorkedInstant};

  SECTION("json") {
    std::vector<std::string> args = base;
    args.insert(args.end(), {"--format", "json", "score", fx.asset.string()});
    json j = json::parse(run_cli(args, fx.dir.path()).out);
    CHECK(j["batch_count"] == 3);
    CHECK(j["degraded"] == false);
    CHECK(j["means"]["R"] == 78.0);
    CHECK(j["instabilities"]["R"] == 0.0);
  }
  SECTION("markdown") {
    std::vector<std::string> args = base;
    args.insert(args.end(), {"--format", "markdown", "score", fx.asset.string()});
    CliResult r = run_cli(args, fx.dir.path());
    CHECK(r.out.find("| R | 78 | 0 |") != std::string::npos);
    CHECK(r.out.find("Batches: 3\n") != std::string::npos);
  }
  SECTION("tuple") {
    std::vector<std::string> args = base;
    args.insert(args.end(), {"--format", "tuple", "score", fx.asset.string()});
    CHECK(run_cli(args, fx.dir.path()).out == "S=(78, 83, 62, 70, 55)\n");
  }
}
