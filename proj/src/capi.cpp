#include "nccech/nccech.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "nccech/workspace.hpp"

namespace ws = nccech::workspace;
using nccech::ErrorKind;

struct nccech_workspace {
  ws::ParseResult parsed;
  std::vector<std::string> texts;
};

namespace {

thread_local std::string last_error;

nccech_status status_of(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidArgument: return NCCECH_INVALID_ARGUMENT;
    case ErrorKind::Arithmetic: return NCCECH_ARITHMETIC;
    case ErrorKind::Rewrite: return NCCECH_REWRITE;
    case ErrorKind::Mismatch: return NCCECH_MISMATCH;
    case ErrorKind::Parse: return NCCECH_PARSE;
    case ErrorKind::Reference: return NCCECH_REFERENCE;
    case ErrorKind::Command: return NCCECH_COMMAND;
  }
  return NCCECH_INTERNAL;
}

nccech_status fail(nccech_status s, const std::string& msg) {
  last_error = msg;
  return s;
}

template <class F>
nccech_status guarded(F&& f) {
  try {
    last_error.clear();
    return f();
  } catch (const nccech::Error& e) {
    return fail(status_of(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(NCCECH_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(NCCECH_INTERNAL, e.what());
  }
}

nccech_status finish(ws::ParseResult r, nccech_workspace** out) {
  auto* h = new nccech_workspace{std::move(r), {}};
  for (const auto& d : h->parsed.errors) h->texts.push_back(d.to_string());
  *out = h;
  if (h->parsed.ok()) return NCCECH_OK;
  return fail(status_of(h->parsed.errors.front().kind), h->texts.front());
}

}  // namespace

extern "C" {

const char* nccech_version(void) { return "0.1.0"; }

const char* nccech_status_name(nccech_status s) {
  switch (s) {
    case NCCECH_OK: return "ok";
    case NCCECH_INVALID_ARGUMENT: return "invalid-argument";
    case NCCECH_ARITHMETIC: return "arithmetic";
    case NCCECH_REWRITE: return "rewrite";
    case NCCECH_MISMATCH: return "mismatch";
    case NCCECH_PARSE: return "parse";
    case NCCECH_REFERENCE: return "reference";
    case NCCECH_COMMAND: return "command";
    case NCCECH_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* nccech_last_error(void) { return last_error.c_str(); }

nccech_status nccech_workspace_open(const char* path, nccech_workspace** out) {
  if (!path || !out) return fail(NCCECH_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] { return finish(ws::parse_file(path), out); });
}

nccech_status nccech_workspace_parse(const char* text, size_t len, nccech_workspace** out) {
  if ((!text && len) || !out) return fail(NCCECH_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] { return finish(ws::parse(std::string(text ? text : "", len)), out); });
}

void nccech_workspace_free(nccech_workspace* w) { delete w; }

size_t nccech_diagnostic_count(const nccech_workspace* w) { return w ? w->texts.size() : 0; }

int nccech_diagnostic_line(const nccech_workspace* w, size_t i) {
  return w && i < w->texts.size() ? w->parsed.errors[i].line : -1;
}

nccech_status nccech_diagnostic_kind(const nccech_workspace* w, size_t i) {
  return w && i < w->texts.size() ? status_of(w->parsed.errors[i].kind) : NCCECH_INVALID_ARGUMENT;
}

const char* nccech_diagnostic_text(const nccech_workspace* w, size_t i) {
  return w && i < w->texts.size() ? w->texts[i].c_str() : nullptr;
}

size_t nccech_command_count(void) { return ws::commands().size(); }

const char* nccech_command_name(size_t i) {
  return i < ws::commands().size() ? ws::commands()[i].c_str() : nullptr;
}

nccech_status nccech_run(const nccech_workspace* w, const char* command, size_t nargs, const char* const* keys,
                         const char* const* values, const nccech_options* options, char** report) {
  if (!w || !command || !report || (nargs && (!keys || !values)))
    return fail(NCCECH_INVALID_ARGUMENT, "null argument");
  *report = nullptr;
  if (!w->parsed.ok()) return fail(NCCECH_PARSE, "workspace has parse errors");
  return guarded([&] {
    std::map<std::string, std::string> args;
    for (size_t i = 0; i < nargs; ++i) {
      if (!keys[i] || !values[i]) return fail(NCCECH_INVALID_ARGUMENT, "null argument");
      args[keys[i]] = values[i];
    }
    ws::RunOptions opt;
    if (options) {
      if (options->has_window) opt.window = std::make_pair(options->window_lo, options->window_hi);
      if (options->has_secondary) opt.secondary = std::make_pair(options->secondary_lo, options->secondary_hi);
      if (options->has_length_cap) opt.length_cap = options->length_cap;
      if (options->has_pmax) opt.pmax = options->pmax;
      if (opt.window && opt.window->first > opt.window->second) return fail(NCCECH_INVALID_ARGUMENT, "empty window");
      if (opt.length_cap && *opt.length_cap < 1) return fail(NCCECH_INVALID_ARGUMENT, "length cap must be positive");
    }
    std::string out = ws::run(*w->parsed.workspace, command, args, opt);
    char* buf = static_cast<char*>(std::malloc(out.size() + 1));
    if (!buf) return fail(NCCECH_INTERNAL, "out of memory");
    std::memcpy(buf, out.c_str(), out.size() + 1);
    *report = buf;
    return NCCECH_OK;
  });
}

void nccech_string_free(char* s) { std::free(s); }

}  // extern "C"
