#include <doctest.h>

#include "cldg/app/config.hpp"

#include <string>

using namespace cldg;
using namespace cldg::app;

namespace {

const std::string soliton_text =
    "experiment=soliton\ntheta=1\nk=2\nn_cells=100\ndomain=-25,25\ntau=0.001\nT=5\nx0=10";

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("the single-soliton example parses to its configuration") {
  const auto cfg = parse_config(soliton_text);
  CHECK(cfg.experiment == Experiment::soliton);
  CHECK(cfg.theta() == 1.0);
  CHECK(cfg.degree() == 2);
  CHECK(cfg.cells() == 100);
  CHECK(cfg.a == -25.0);
  CHECK(cfg.b == 25.0);
  CHECK(cfg.tau == 0.001);
  CHECK(cfg.T == 5.0);
  CHECK(cfg.x0 == 10.0);
  CHECK(cfg.lambda == 2.0);
  CHECK(cfg.fp_tolerance == 1e-13);
  CHECK(cfg.max_iterations == 100);
  CHECK(cfg.initial_data == InitialData::l2_projection);
  CHECK(cfg.snapshot_times == std::vector<double>{0.0, 5.0});
}

TEST_CASE("missing tau is named") {
  const std::string text = "experiment=soliton\ntheta=1\nk=2\nn_cells=100\ndomain=-25,25\nT=5";
  const auto msg = error_of(text);
  CHECK(msg.find("'tau'") != std::string::npos);
}

TEST_CASE("theta outside [0, 1] is a range error on its line") {
  const auto msg = error_of("experiment=soliton\ntheta=1.5\n");
  CHECK(msg.find("line 2") != std::string::npos);
  CHECK(msg.find("outside [0, 1]") != std::string::npos);
  try {
    parse_config("experiment=soliton\ntheta=1.5\n");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("unknown, duplicate and malformed entries report their line") {
  CHECK(error_of(soliton_text + "\nfoo=1") == "line 9: unknown key 'foo'");
  CHECK(error_of(soliton_text + "\ntau=0.1").find("line 9: duplicate key 'tau'") != std::string::npos);
  CHECK(error_of("experiment=soliton\nno equals sign").find("line 2") != std::string::npos);
  CHECK(error_of("experiment=soliton\ntau=fast").find("line 2: tau: expected a number") != std::string::npos);
  CHECK(error_of("experiment=soliton\nk=2.5").find("line 2: k: expected an integer") != std::string::npos);
  CHECK(error_of("experiment=walk").find("unknown kind 'walk'") != std::string::npos);
  CHECK(error_of("tau=1").find("'experiment'") != std::string::npos);
}

TEST_CASE("comments and blank lines are ignored") {
  const auto cfg = parse_config("# header\n\n  experiment = soliton  # trailing\n theta=1\nk=2\nh=0.5\n"
                                "domain=-25, 25\ntau=0.001\nT=5\n");
  CHECK(cfg.cells() == 100);
  CHECK(cfg.b == 25.0);
}

TEST_CASE("mesh size is given by exactly one of n_cells and h") {
  const std::string base = "experiment=gaussian\ndomain=-30,30\ntau=0.001\nT=1\n";
  CHECK(parse_config(base + "h=0.2").cells() == 300);
  CHECK(error_of(base).find("n_cells") != std::string::npos);
  CHECK(error_of(base + "h=0.2\nn_cells=300").find("exactly one") != std::string::npos);
  CHECK(error_of(base + "h=0.7").find("multiple of h") != std::string::npos);
}

TEST_CASE("single-run experiments take one theta and one k") {
  CHECK(error_of(soliton_text + "\nlambda=2").empty());
  const std::string swept = "experiment=soliton\ntheta=0.5,1\nk=2\nn_cells=100\ndomain=-25,25\ntau=0.001\nT=5";
  CHECK(error_of(swept).find("single value") != std::string::npos);
}

TEST_CASE("snapshot times must lie in [0, T]") {
  CHECK(error_of(soliton_text + "\nsnapshot_times=0,2,2.5,5").empty());
  CHECK(error_of(soliton_text + "\nsnapshot_times=0,6").find("outside [0, T]") != std::string::npos);
}

TEST_CASE("converge defaults to the desk scale and --paper-scale restores the printed values") {
  auto cfg = parse_config("experiment=converge\ntheta=0.4,0.5,1\nk=2,3\nN_list=60,120,240,480");
  CHECK(cfg.tau == 1e-4);
  CHECK(cfg.T == 0.5);
  CHECK(cfg.a == -30.0);
  CHECK(cfg.b == 30.0);
  CHECK(cfg.x0 == 10.0);
  CHECK(cfg.thetas == std::vector<double>{0.4, 0.5, 1.0});
  CHECK(cfg.degrees == std::vector<int>{2, 3});
  CHECK(cfg.n_list == std::vector<Index>{60, 120, 240, 480});
  apply_paper_scale(cfg);
  CHECK(cfg.tau == 1e-5);
  CHECK(cfg.T == 1.0);

  CHECK(error_of("experiment=converge\nN_list=60,60").find("strictly increasing") != std::string::npos);
}

TEST_CASE("--paper-scale leaves other experiments alone") {
  auto cfg = parse_config(soliton_text);
  apply_paper_scale(cfg);
  CHECK(cfg.tau == 0.001);
  CHECK(cfg.T == 5.0);
}

TEST_CASE("project_study defaults and projection kinds") {
  const auto cfg = parse_config("experiment=project_study");
  CHECK(cfg.a == 0.0);
  CHECK(cfg.b == 1.0);
  CHECK(cfg.n_list == std::vector<Index>{16, 32, 64});
  CHECK(cfg.degrees == std::vector<int>{1, 2, 3});
  CHECK(cfg.thetas == std::vector<double>{0.4, 0.9, 1.0});
  CHECK(cfg.projections.size() == 2);
  CHECK(parse_config("experiment=project_study\nprojection=Q_printed").projections.front() ==
        ProjectionKind::Q_printed);
  CHECK(error_of("experiment=project_study\nprojection=R").find("unknown kind 'R'") != std::string::npos);
}

TEST_CASE("conserve_check sweeps theta unless told otherwise") {
  const std::string base = "experiment=conserve_check\ndomain=-25,25\nh=0.5\ntau=0.001\nT=1\n";
  CHECK(parse_config(base).thetas == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
  CHECK(parse_config(base + "theta=0.3").thetas == std::vector<double>{0.3});
}

TEST_CASE("a forced experiment may be omitted but must agree") {
  CHECK(parse_config("N_list=20,40", Experiment::converge).experiment == Experiment::converge);
  CHECK_THROWS_AS(parse_config(soliton_text, Experiment::converge), ConfigError);
}

TEST_CASE("the resolved stamp parses back to itself") {
  for (const std::string& text :
       {soliton_text + "\nsnapshot_times=0,2.5,5\ninitial_data=generalized_P",
        std::string("experiment=double_soliton\ndomain=-30,30\nh=0.5\ntau=0.001\nT=2\nc1=0.5"),
        std::string("experiment=converge\ntheta=0.4,1\nk=2\nN_list=60,120\nT=0.3"),
        std::string("experiment=project_study\nprojection=P")}) {
    const auto cfg = parse_config(text);
    std::string stamp = cfg.resolved();
    std::string lines;
    for (std::size_t pos = 0;;) {
      const auto next = stamp.find("; ", pos);
      lines += stamp.substr(pos, next - pos) + "\n";
      if (next == std::string::npos) break;
      pos = next + 2;
    }
    CHECK(parse_config(lines).resolved() == stamp);
  }
}

TEST_CASE("load_config reports unreadable files") {
  CHECK_THROWS_AS(load_config("/nonexistent/cldg.cfg"), ConfigError);
}
