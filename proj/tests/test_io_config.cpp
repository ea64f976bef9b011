#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pvelab/config.hpp"
#include "pvelab/io.hpp"
#include "pvelab/verify.hpp"

using namespace pvelab;

namespace {

std::filesystem::path temp_dir() {
    const auto dir =
        std::filesystem::temp_directory_path() / "pvelab-test-io";
    std::filesystem::create_directories(dir);
    return dir;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path);
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

}  // namespace

TEST_CASE("format_real round-trips doubles bit-exactly") {
    Rng rng(271);
    for (int i = 0; i < 1000; ++i) {
        const double x = rng.uniform(-1e6, 1e6) * std::pow(10.0, rng.next_int(9) - 4);
        CHECK(std::stod(format_real(x)) == x);
    }
    CHECK(std::stod(format_real(1.0 / 3.0)) == 1.0 / 3.0);
    CHECK(format_real(0.0) == "0");
    CHECK(format_real(1.0) == "1");
}

TEST_CASE("save_model/load_model round-trip and header") {
    Rng rng(277);
    const TabularMdp mdp = random_mdp(rng, 4, 3, 0.93);
    const auto path = temp_dir() / "model.txt";
    save_model(path.string(), mdp, 2);

    std::ifstream in(path);
    std::string first_line;
    std::getline(in, first_line);
    CHECK(first_line.rfind("pvelab-model 1 4 3 2 ", 0) == 0);

    const TabularMdp back = load_model(path.string());
    CHECK(back.discount == mdp.discount);
    CHECK(back.reward == mdp.reward);
    for (int a = 0; a < 3; ++a) CHECK(back.transition[a] == mdp.transition[a]);

    CHECK_THROWS_AS(load_model((temp_dir() / "absent.txt").string()),
                    std::runtime_error);
    const auto bad = temp_dir() / "bad.txt";
    std::ofstream(bad) << "something-else 1 2 2 0 0.9\n";
    CHECK_THROWS_AS(load_model(bad.string()), std::runtime_error);
}

TEST_CASE("CsvWriter writes header and rows only on flush") {
    const auto path = temp_dir() / "table.csv";
    std::filesystem::remove(path);
    CsvWriter writer(path.string(), "a,b,c");
    writer.row({"1", CsvWriter::real(0.5), "x"});
    writer.row({"2", CsvWriter::real(1.0 / 3.0), "y"});
    CHECK_FALSE(std::filesystem::exists(path));
    writer.flush();
    CHECK(slurp(path) ==
          "a,b,c\n1,0.5,x\n2,0.33333333333333331,y\n");
}

TEST_CASE("ConfigFile parses sections, comments, and typed getters") {
    const std::string text =
        "# a comment\n"
        "top = 1\n"
        "[env]\n"
        "slip = 0.15   # trailing comment\n"
        "flag = true\n"
        "[train]\n"
        "k_list = 1, 5, 10, inf\n";
    const ConfigFile config = ConfigFile::parse(text);
    CHECK(config.has("top"));
    CHECK(config.get("env.slip") == "0.15");
    CHECK(config.get_double("env.slip", 0.0) == 0.15);
    CHECK(config.get_bool("env.flag", false));
    CHECK(config.get_long("absent", 7) == 7);
    CHECK(config.get_list("train.k_list") ==
          std::vector<std::string>{"1", "5", "10", "inf"});
    CHECK_THROWS_AS(config.get("env.absent"), std::runtime_error);

    CHECK_THROWS_AS(ConfigFile::parse("[unterminated\n"), std::runtime_error);
    CHECK_THROWS_AS(ConfigFile::parse("no equals sign\n"), std::runtime_error);

    // canonical_text is sorted and stable, so its hash is order-independent.
    const ConfigFile reordered = ConfigFile::parse(
        "[train]\nk_list = 1, 5, 10, inf\n[env]\nflag = true\nslip = 0.15\n"
        "[]\ntop = 1\n");
    CHECK(fnv1a_hash(config.canonical_text()) ==
          fnv1a_hash(reordered.canonical_text()));
}

TEST_CASE("ExperimentConfig reads keys and maps inf to the PVE order") {
    const ConfigFile file = ConfigFile::parse(
        "[env]\nslip = 0.1\n[train]\nk_list = 2, inf\niters = 123\n"
        "[run]\nn_seeds = 2\n");
    const ExperimentConfig c = ExperimentConfig::from_file(file, "model-space");
    CHECK(c.experiment == "model-space");
    CHECK(c.slip == 0.1);
    CHECK(c.k_list == std::vector<int>{2, kInfiniteOrder});
    CHECK(c.iters == 123);
    CHECK(c.n_seeds == 2);
    // Untouched keys keep their defaults.
    CHECK(c.discount == 0.99);
    CHECK(c.rank_list == std::vector<int>{10, 104});
}

TEST_CASE("manifest gate: matching reruns allowed, mismatches refused") {
    const auto dir = temp_dir() / "run";
    std::filesystem::remove_all(dir);
    const std::string config_a = "x = 1\n";
    const std::string config_b = "x = 2\n";

    CHECK(manifest_allows(dir.string(), config_a, 3, false));
    write_manifest(dir.string(), config_a, 3, "note");
    CHECK(manifest_allows(dir.string(), config_a, 3, false));
    CHECK_FALSE(manifest_allows(dir.string(), config_b, 3, false));
    CHECK_FALSE(manifest_allows(dir.string(), config_a, 4, false));
    CHECK(manifest_allows(dir.string(), config_b, 3, true));

    const std::string manifest = slurp(dir / "manifest.txt");
    CHECK(manifest.find("config_hash = ") != std::string::npos);
    CHECK(manifest.find("seed = 3") != std::string::npos);
    CHECK(manifest.find("note = note") != std::string::npos);
    CHECK(manifest.find("x = 1") != std::string::npos);
}
