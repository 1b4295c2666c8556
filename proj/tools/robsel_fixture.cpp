#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <string>

#include "robsel/error.hpp"
#include "robsel/fixture.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Write a synthetic checkpoint trajectory with its manifest", "robsel-fixture"};
  std::uint64_t seed = 20240501;
  std::size_t images = 16;
  std::string out;
  app.add_option("--seed", seed, "Master seed");
  app.add_option("--images", images, "Number of target images")->check(CLI::Range(2, 4096));
  app.add_option("--out", out, "Output directory")->required();
  CLI11_PARSE(app, argc, argv);
  try {
    const auto fixture = robsel::make_fixture(seed, images);
    std::cout << robsel::write_fixture(fixture, out).string() << "\n";
  } catch (const robsel::Error& e) {
    std::cerr << "robsel-fixture: error[" << robsel::category_name(e.category()) << "]: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
