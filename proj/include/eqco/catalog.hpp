// Embedded catalog of the 28 isomorphism types of groups of order <= 15.
// Mirrors data/catalog.txt; the file is authoritative when present, the
// embedded copy keeps the binary self-contained.
#pragma once

#include <eqco/specparse.hpp>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace eqco::catalog {

struct CatalogEntry {
  std::string name;
  std::string spec_text;
  groups::GroupSpec spec;
};

inline const char* embedded_catalog_text() {
  return R"(C1 := C1
C2 := C2
C3 := C3
C4 := C4
C2xC2 := C2xC2
C5 := C5
C6 := C6
S3 := D3
C7 := C7
C8 := C8
C4xC2 := C4xC2
C2xC2xC2 := E(2,3)
D4 := D4
Q8 := Q8
C9 := C9
C3xC3 := E(3,2)
C10 := C10
D5 := D5
C11 := C11
C12 := C12
C6xC2 := C6xC2
D6 := D6
A4 := EPQ(2,2;3,1;[[0,1],[1,1]])
Dic3 := MC(3;4;2)
C13 := C13
C14 := C14
D7 := D7
C15 := C15
)";
}

inline std::vector<CatalogEntry> parse_catalog(std::istream& in) {
  std::vector<CatalogEntry> out;
  std::string line;
  while (std::getline(in, line)) {
    size_t h = line.find('#');
    if (h != std::string::npos) line.erase(h);
    size_t sep = line.find(":=");
    if (sep == std::string::npos) continue;
    auto trim = [](std::string s) {
      size_t a = s.find_first_not_of(" \t\r");
      size_t b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    CatalogEntry e;
    e.name = trim(line.substr(0, sep));
    e.spec_text = trim(line.substr(sep + 2));
    if (e.name.empty() || e.spec_text.empty()) continue;
    e.spec = specparse::parse_group_spec(e.spec_text);
    out.push_back(std::move(e));
  }
  return out;
}

// Loads data/catalog.txt when reachable, else the embedded copy.
inline std::vector<CatalogEntry> load_catalog(const std::string& path = "") {
  if (!path.empty()) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open catalog file: " + path);
    return parse_catalog(f);
  }
  for (const char* candidate : {"data/catalog.txt", "../data/catalog.txt"}) {
    std::ifstream f(candidate);
    if (f) return parse_catalog(f);
  }
  std::istringstream s(embedded_catalog_text());
  return parse_catalog(s);
}

}  // namespace eqco::catalog
