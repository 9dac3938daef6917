// Byte comparison of CLI text output against tests/golden. Pass --update to
// rewrite the files.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "derinv/catalog.hpp"

namespace {

std::string file_name(const std::vector<std::string>& args) {
  std::string s;
  for (const auto& a : args) {
    if (!s.empty()) s += '_';
    for (char c : a) s += (c == ':' || c == '/' || c == ' ') ? '-' : c;
  }
  return s + ".txt";
}

}  // namespace

int main(int argc, char** argv) {
  bool update = argc > 1 && std::string(argv[1]) == "--update";
  std::vector<std::vector<std::string>> cases;
  for (const auto& e : derinv::builtin_catalog()) cases.push_back({"invariants", e.key});
  for (const char* key : {"k3:h:4", "k3:ss:3", "abelian:3:2", "curve:2:1"}) cases.push_back({"ss", key, "--kind", "slope"});
  cases.push_back({"ss", "k3:ss:3", "--kind", "descent", "--twist", "p"});
  cases.push_back({"ss", "k3:ss:3", "--kind", "tate", "--twist", "p"});
  cases.push_back({"ss", "abelian:3:2", "--kind", "descent"});
  cases.push_back({"compare", "k3:ss:1", "k3:ss:2"});
  cases.push_back({"compare", "k3:h:3", "k3:ss:5"});
  cases.push_back({"catalog", "list"});

  int failed = 0;
  for (const auto& args : cases) {
    std::ostringstream out, err;
    derinv::cli::run(args, out, err);
    std::string path = std::string(DERINV_GOLDEN_DIR) + "/" + file_name(args);
    if (update) {
      std::ofstream(path, std::ios::binary) << out.str();
      continue;
    }
    std::ifstream in(path, std::ios::binary);
    std::stringstream want;
    want << in.rdbuf();
    if (!in || want.str() != out.str()) {
      std::printf("MISMATCH %s\n", path.c_str());
      ++failed;
    }
  }
  std::printf("%zu golden files, %d mismatches%s\n", cases.size(), failed, update ? " (updated)" : "");
  return failed == 0 ? 0 : 1;
}
