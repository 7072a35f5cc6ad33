// Emits the synthetic two-person test fixture (meshes, canonical targets,
// rig views, one perspective observation) used by the integration tests,
// or dumps the builtin occlusion silhouette templates.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iostream>

#include "hug/canonical/occlusion_sim.hpp"
#include "hug/core/errors.hpp"
#include "hug/fixture/fixture.hpp"
#include "hug/io/image_io.hpp"

namespace fs = std::filesystem;
using namespace hug;

int main(int argc, char** argv) {
  CLI::App app{"synthetic fixture generator"};

  std::string out;
  int resolution = 128;
  double hand_gap = 0.03;
  double perturbation = 0.01;
  std::uint64_t seed = 11;
  std::string silhouette_dir;
  app.add_option("--out", out, "fixture output directory");
  app.add_option("--resolution", resolution, "render resolution");
  app.add_option("--hand-gap", hand_gap, "gap between the reaching hands (m, normalized frame pre-scale)");
  app.add_option("--perturbation", perturbation, "init mesh displacement amplitude");
  app.add_option("--seed", seed, "perturbation seed");
  app.add_option("--silhouettes", silhouette_dir, "dump builtin silhouette templates as PNGs and exit");

  try {
    app.parse(argc, argv);

    if (!silhouette_dir.empty()) {
      fs::create_directories(silhouette_dir);
      std::vector<ImageBuffer> templates = canonical::builtin_silhouette_templates();
      for (std::size_t i = 0; i < templates.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "template_%02zu.png", i);
        io::write_png(fs::path(silhouette_dir) / name, templates[i]);
      }
      std::cout << "wrote " << templates.size() << " templates to " << silhouette_dir << "\n";
      return 0;
    }

    if (out.empty()) throw InputError("--out is required");
    fixture::TwoPersonFixture fix = fixture::make_two_person(hand_gap, perturbation, seed);
    fixture::write_fixture_tree(out, fix, resolution);
    std::cout << "wrote fixture to " << out << " (" << fix.gt.total_vertices() << " gt vertices, resolution "
              << resolution << ")\n";
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
