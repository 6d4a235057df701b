#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "normsim/error.hpp"
#include "normsim/experiments.hpp"

using namespace normsim;

namespace {

TraceMatrix matrix_of(std::vector<std::vector<double>> rows) {
  TraceMatrix m;
  m.runs = rows.size();
  m.periods = rows.front().size();
  for (const auto& r : rows) m.values.insert(m.values.end(), r.begin(), r.end());
  return m;
}

ScenarioGrid small_grid() {
  ScenarioGrid g;
  g.base.periods = 60;
  g.base.memory_span = 10;
  g.base.seed = 3;
  g.runs = 4;
  return g;
}

std::string csv_text(const GridResults& results) {
  std::ostringstream out;
  write_csv(out, results);
  return out.str();
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream in(line);
  for (std::string field; std::getline(in, field, ',');) out.push_back(field);
  return out;
}

}  // namespace

TEST_SUITE("experiments.aggregate") {
  TEST_CASE("critical value at 99.9%") {
    // Standard normal table: z_{0.9995} = 3.2905
    CHECK(normal_critical_value(0.999) == doctest::Approx(3.2905).epsilon(2e-5));
    CHECK(normal_critical_value(0.95) == doctest::Approx(1.95996).epsilon(1e-5));
  }

  TEST_CASE("identical runs collapse the band") {
    const auto s = aggregate(matrix_of({{0.3, 0.7}, {0.3, 0.7}, {0.3, 0.7}}));
    for (std::size_t t = 0; t < 2; ++t) {
      CHECK(s.ci_low[t] == s.mean[t]);
      CHECK(s.ci_high[t] == s.mean[t]);
    }
    CHECK(s.runs == 3);
  }

  TEST_CASE("two runs: half-width z * sd / sqrt(2)") {
    const auto s = aggregate(matrix_of({{0.4, 0.4}, {0.6, 0.6}}), 0.999);
    // sd = sqrt(((0.1)^2 + (0.1)^2) / 1) = 0.141421..., half = z * 0.1
    const double half = normal_critical_value(0.999) * 0.1;
    CHECK(s.mean[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(s.ci_high[0] - s.mean[0] == doctest::Approx(half).epsilon(1e-12));
    CHECK(s.mean[0] - s.ci_low[0] == doctest::Approx(0.32905).epsilon(1e-4));
  }

  TEST_CASE("means are column means and order of runs does not matter") {
    RandomStream rng(1);
    std::vector<std::vector<double>> rows(30, std::vector<double>(7));
    for (auto& r : rows)
      for (double& v : r) v = rng.uniform01();
    const auto s = aggregate(matrix_of(rows));
    for (std::size_t t = 0; t < 7; ++t) {
      double col = 0.0;
      for (const auto& r : rows) col += r[t];
      CHECK(s.mean[t] == doctest::Approx(col / 30).epsilon(1e-12));
      CHECK(s.ci_low[t] <= s.mean[t]);
      CHECK(s.mean[t] <= s.ci_high[t]);
    }
    std::reverse(rows.begin(), rows.end());
    const auto r = aggregate(matrix_of(rows));
    for (std::size_t t = 0; t < 7; ++t) {
      CHECK(r.mean[t] == doctest::Approx(s.mean[t]).epsilon(1e-12));
      CHECK(r.ci_high[t] == doctest::Approx(s.ci_high[t]).epsilon(1e-12));
    }
  }

  TEST_CASE("band narrows as 1/sqrt(R)") {
    const std::vector<std::vector<double>> base{{0.1}, {0.5}, {0.9}, {0.3}};
    auto repeated = base;
    for (int k = 1; k < 4; ++k) repeated.insert(repeated.end(), base.begin(), base.end());
    const auto a = aggregate(matrix_of(base));
    const auto b = aggregate(matrix_of(repeated));
    // Four copies: sum of squares x4, so sd ratio sqrt((SS/3) / (4SS/15)) and
    // sqrt(R) ratio 2.
    const double ratio = (a.ci_high[0] - a.mean[0]) / (b.ci_high[0] - b.mean[0]);
    CHECK(ratio == doctest::Approx(2.0 * std::sqrt(15.0 / 12.0)).epsilon(1e-12));
  }

  TEST_CASE("fewer than two runs is an error") {
    CHECK_THROWS_AS(aggregate(matrix_of({{0.5}})), ParameterError);
  }
}

TEST_SUITE("experiments.grid") {
  TEST_CASE("main grid has 18 cells in declaration order") {
    const auto cells = figure_grid("main").cells();
    REQUIRE(cells.size() == 18);
    CHECK(cells.front().id == "K2C0S0_a1_w0_d2_ns2_rho0.3");
    CHECK(cells[1].id == "K2C0S0_a1_w0.3_d2_ns2_rho0.3");
    CHECK(cells[3].id == "K2C0S0_a0.75_w0_d2_ns2_rho0.3");
    CHECK(cells.back().id == "K2C2S2_a0.25_w0.5_d2_ns2_rho0.3");
  }

  TEST_CASE("sensitivity grids: alpha = 1, strong norms plus benchmark") {
    for (const auto& name : {"degree", "rho", "nsoc"}) {
      const auto grid = figure_grid(name);
      CHECK(grid.schemes.size() == 1);
      CHECK(grid.schemes[0].alpha == 1.0);
      REQUIRE(grid.weights.size() == 2);
      CHECK(grid.weights[0].norm == 0.0);
      CHECK(grid.weights[1].norm == 0.5);
      CHECK_NOTHROW(grid.validate());
    }
    CHECK(figure_grid("degree").cells().size() == 2 * 2 * 4);
    CHECK(figure_grid("nsoc").cells().size() == 2 * 2 * 5);
    CHECK_THROWS_AS(figure_grid("bogus"), ParameterError);
  }

  TEST_CASE("invalid cells are named") {
    auto g = small_grid();
    g.degrees = {2, 5};
    CHECK_THROWS_WITH_AS(g.validate(), doctest::Contains("K2C0S0_a1_w0_d5"), ParameterError);
    g = small_grid();
    g.runs = 1;
    CHECK_THROWS_AS(g.validate(), ParameterError);
  }

  TEST_CASE("results do not depend on worker count") {
    const auto g = small_grid();
    const auto serial = csv_text(run_grid(g, 1));
    CHECK(csv_text(run_grid(g, 8)) == serial);
    CHECK(csv_text(run_grid(g, 1)) == serial);
  }
}

TEST_SUITE("experiments.csv") {
  TEST_CASE("schema, row count and round trip") {
    auto g = small_grid();
    g.complexities = {{2, 0, 0}};
    g.schemes = {{0.75, 0.25}};
    g.weights = {{0.7, 0.3}, {0.5, 0.5}};
    const auto results = run_grid(g, 2);
    const auto text = csv_text(results);
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    CHECK(line == kCsvHeader);
    std::size_t rows = 0;
    while (std::getline(in, line)) {
      const auto f = split(line);
      REQUIRE(f.size() == 16);
      const auto& cell = results.cells[rows / 60];
      const std::size_t t = rows % 60;
      CHECK(f[0] == cell.id);
      CHECK(f[4] == "0.3");
      CHECK(f[5] == "0.75");
      CHECK(f[6] == "0.25");
      CHECK(std::stoul(f[11]) == t + 1);
      CHECK(std::stod(f[12]) == doctest::Approx(cell.series.mean[t]).epsilon(1e-11));
      CHECK(std::stod(f[13]) == doctest::Approx(cell.series.ci_low[t]).epsilon(1e-11));
      CHECK(std::stod(f[14]) == doctest::Approx(cell.series.ci_high[t]).epsilon(1e-11));
      CHECK(f[15] == "4");
      ++rows;
    }
    CHECK(rows == 2 * 60);
  }

  TEST_CASE("files are overwritten with identical bytes") {
    const auto dir = std::filesystem::temp_directory_path() / "normsim_csv_test";
    std::filesystem::create_directories(dir);
    const auto path = (dir / "out.csv").string();
    const auto results = run_grid(small_grid(), 2);
    auto slurp = [&] {
      std::ifstream in(path, std::ios::binary);
      return std::string(std::istreambuf_iterator<char>(in), {});
    };
    write_csv(results, path);
    const auto first = slurp();
    write_csv(results, path);
    CHECK(slurp() == first);
    CHECK(first == csv_text(results));
    CHECK_THROWS_AS(write_csv(results, (dir / "missing" / "x.csv").string()), IoError);
    CHECK_THROWS_AS(write_csv(GridResults{}, path), ParameterError);
    std::filesystem::remove_all(dir);
  }
}

TEST_SUITE("experiments.config") {
  TEST_CASE("shipped template parses to the parameter table grid") {
    const auto grid = load_grid(NORMSIM_SOURCE_DIR "/configs/table1.yaml");
    CHECK_NOTHROW(grid.validate());
    CHECK(grid.cells().size() == 18);
    CHECK(grid.runs == 1000);
    CHECK(grid.base.periods == 500);
    CHECK(grid.base.memory_span == 50);
    CHECK(grid.rhos == std::vector<double>{0.3});
    CHECK(grid.degrees == std::vector<int>{2});
    CHECK(grid.confidence == 0.999);
  }

  TEST_CASE("scalars, lists and single tuples") {
    const auto g = parse_grid(
        "p: 4\nn: 4\nm: 16\ncomplexity: [2, 2, 2]\nschemes: [[1, 0]]\nweights: [[0.5, 0.5], [1, 0]]\n"
        "d: [1, 2, 3]\nn_s: 3\nrho: 0.9\nt_l: 40\nt_max: 100\nseed: 123456789012\nruns: 7\n");
    CHECK(g.complexities.size() == 1);
    CHECK(g.complexities[0].c == 2);
    CHECK(g.weights.size() == 2);
    CHECK(g.degrees == std::vector<int>{1, 2, 3});
    CHECK(g.social_tasks == std::vector<int>{3});
    CHECK(g.base.seed == 123456789012ULL);
    CHECK(g.cells().size() == 6);
  }

  TEST_CASE("bad configs are reported") {
    CHECK_THROWS_WITH_AS(parse_grid("colour: blue\n"), doctest::Contains("colour"), ConfigError);
    CHECK_THROWS_AS(parse_grid("m: 12\n"), ConfigError);
    CHECK_THROWS_AS(parse_grid("schemes: [[1, 0, 0]]\n"), ConfigError);
    CHECK_THROWS_AS(parse_grid("rho: high\n"), ConfigError);
    CHECK_THROWS_AS(parse_grid("[1, 2"), ConfigError);
    CHECK_THROWS_AS(load_grid("/nonexistent.yaml"), ConfigError);
  }
}
