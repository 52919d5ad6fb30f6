#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "nccech/nccech.h"

namespace {

bool range(const std::string& s, int& lo, int& hi) {
  auto c = s.find(':', 1);
  if (c == std::string::npos) return false;
  try {
    std::size_t a = 0, b = 0;
    lo = std::stoi(s.substr(0, c), &a);
    hi = std::stoi(s.substr(c + 1), &b);
    return a == c && b == s.size() - c - 1 && lo <= hi;
  } catch (const std::exception&) {
    return false;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nccech: cohomology, obstructions and tilting checks for NC schemes over finite posets"};
  std::string command, input, window, window2, json_out;
  int cap = 0, pmax = -1;
  std::vector<std::string> rest;

  std::string names;
  for (std::size_t i = 0; i < nccech_command_count(); ++i) names += (i ? " | " : "") + std::string(nccech_command_name(i));
  app.add_option("command", command, names)->required();
  app.add_option("args", rest, "key=value arguments such as F=T N=O(-2) X=a,b");
  app.add_option("--input,-i", input, "workspace file")->required();
  app.add_option("--window", window, "primary weight range lo:hi");
  app.add_option("--window2", window2, "secondary weight range lo:hi");
  app.add_option("--length-cap", cap, "word length cap")->check(CLI::PositiveNumber);
  app.add_option("--pmax", pmax, "largest Ext degree checked")->check(CLI::NonNegativeNumber);
  app.add_option("--json", json_out, "write the report here instead of stdout");
  CLI11_PARSE(app, argc, argv);

  nccech_options opt{};
  if (!window.empty() && !(opt.has_window = range(window, opt.window_lo, opt.window_hi))) {
    std::cerr << "nccech: bad --window '" << window << "'\n";
    return 2;
  }
  if (!window2.empty() && !(opt.has_secondary = range(window2, opt.secondary_lo, opt.secondary_hi))) {
    std::cerr << "nccech: bad --window2 '" << window2 << "'\n";
    return 2;
  }
  if (cap > 0) opt.has_length_cap = 1, opt.length_cap = cap;
  if (pmax >= 0) opt.has_pmax = 1, opt.pmax = pmax;

  std::vector<std::string> keys, values;
  for (const auto& a : rest) {
    auto eq = a.find('=');
    if (eq == std::string::npos || eq == 0) {
      std::cerr << "nccech: expected key=value, got '" << a << "'\n";
      return 2;
    }
    keys.push_back(a.substr(0, eq));
    values.push_back(a.substr(eq + 1));
  }
  std::vector<const char*> kp, vp;
  for (std::size_t i = 0; i < keys.size(); ++i) kp.push_back(keys[i].c_str()), vp.push_back(values[i].c_str());

  nccech_workspace* ws = nullptr;
  nccech_status st = nccech_workspace_open(input.c_str(), &ws);
  if (st != NCCECH_OK) {
    std::size_t n = nccech_diagnostic_count(ws);
    if (!n) std::cerr << input << ": " << nccech_last_error() << "\n";
    for (std::size_t i = 0; i < n; ++i) std::cerr << input << ": " << nccech_diagnostic_text(ws, i) << "\n";
    nccech_workspace_free(ws);
    return 1;
  }
  char* report = nullptr;
  st = nccech_run(ws, command.c_str(), kp.size(), kp.data(), vp.data(), &opt, &report);
  nccech_workspace_free(ws);
  if (st != NCCECH_OK) {
    std::cerr << "nccech: " << nccech_status_name(st) << ": " << nccech_last_error() << "\n";
    return 1;
  }
  if (json_out.empty()) {
    std::fputs(report, stdout);
  } else {
    std::ofstream f(json_out, std::ios::binary);
    f << report;
    if (!f) {
      nccech_string_free(report);
      std::cerr << "nccech: cannot write " << json_out << "\n";
      return 1;
    }
  }
  nccech_string_free(report);
  return 0;
}
