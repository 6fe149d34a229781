#include <filesystem>
#include <iostream>

#include "rvpp/core/instance_io.hpp"
#include "rvpp/core/synthetic.hpp"

// Regenerate data/rvpp24.json and data/toy.json: write_data <data dir>
int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: write_data <directory>\n";
    return 1;
  }
  const std::filesystem::path dir = argv[1];
  std::filesystem::create_directories(dir);
  rvpp::save_instance_file(rvpp::reference_instance(), dir / "rvpp24.json");
  rvpp::save_instance_file(rvpp::toy_instance(), dir / "toy.json");
  return 0;
}
