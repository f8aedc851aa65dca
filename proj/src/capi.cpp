#include "slsito/slsito.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "slsito/config.hpp"
#include "slsito/error.hpp"
#include "slsito/funcatalog.hpp"
#include "slsito/harness.hpp"
#include "slsito/version.hpp"

struct slsito_config {
  slsito::harness::ExperimentConfig cfg;
};

struct slsito_summary {
  slsito::harness::EnsembleSummary summary;
};

namespace {

thread_local std::string g_last_error;

slsito_status fail(slsito_status s, const char* msg) {
  g_last_error = msg;
  return s;
}

template <class F>
slsito_status guarded(F&& f) {
  try {
    g_last_error.clear();
    return f();
  } catch (const slsito::InvalidArgument& e) {
    return fail(SLSITO_INVALID_ARGUMENT, e.what());
  } catch (const slsito::ConfigurationError& e) {
    return fail(SLSITO_CONFIGURATION_ERROR, e.what());
  } catch (const slsito::EvaluationError& e) {
    return fail(SLSITO_EVALUATION_ERROR, e.what());
  } catch (const std::bad_alloc&) {
    return fail(SLSITO_OUT_OF_MEMORY, "out of memory");
  } catch (const std::exception& e) {
    return fail(SLSITO_INTERNAL_ERROR, e.what());
  } catch (...) {
    return fail(SLSITO_INTERNAL_ERROR, "unknown error");
  }
}

slsito_status copy_out(const std::string& s, char* buffer, size_t capacity, size_t* needed) {
  if (needed) *needed = s.size() + 1;
  if (buffer == nullptr || capacity < s.size() + 1) {
    return fail(SLSITO_BUFFER_TOO_SMALL, "buffer too small");
  }
  std::memcpy(buffer, s.c_str(), s.size() + 1);
  return SLSITO_OK;
}

struct CatalogStrings {
  std::vector<std::string> formulas;
};

const CatalogStrings& catalog_strings() {
  static const CatalogStrings cs = [] {
    CatalogStrings out;
    for (const auto& e : slsito::fn::catalog()) {
      std::string f;
      for (auto formula : e.formulas) {
        if (!f.empty()) f += ',';
        f += slsito::fn::formula_name(formula);
      }
      out.formulas.push_back(std::move(f));
    }
    return out;
  }();
  return cs;
}

#define SLSITO_REQUIRE(cond, msg) \
  if (!(cond)) return fail(SLSITO_INVALID_ARGUMENT, msg)

}  // namespace

extern "C" {

const char* slsito_version(void) { return slsito::kVersion; }

const char* slsito_last_error(void) { return g_last_error.c_str(); }

const char* slsito_status_string(slsito_status status) {
  switch (status) {
    case SLSITO_OK: return "ok";
    case SLSITO_INVALID_ARGUMENT: return "invalid argument";
    case SLSITO_CONFIGURATION_ERROR: return "configuration error";
    case SLSITO_EVALUATION_ERROR: return "evaluation error";
    case SLSITO_OUT_OF_MEMORY: return "out of memory";
    case SLSITO_BUFFER_TOO_SMALL: return "buffer too small";
    case SLSITO_INTERNAL_ERROR: return "internal error";
  }
  return "unknown status";
}

slsito_status slsito_config_create(slsito_config** out) {
  return guarded([&] {
    SLSITO_REQUIRE(out != nullptr, "null output handle");
    *out = new slsito_config();
    return SLSITO_OK;
  });
}

void slsito_config_destroy(slsito_config* config) { delete config; }

slsito_status slsito_config_load(slsito_config* config, const char* path) {
  return guarded([&] {
    SLSITO_REQUIRE(config != nullptr && path != nullptr, "null argument");
    slsito::harness::ExperimentConfig copy = config->cfg;
    copy.load_file(path);
    config->cfg = std::move(copy);
    return SLSITO_OK;
  });
}

slsito_status slsito_config_set(slsito_config* config, const char* key, const char* value) {
  return guarded([&] {
    SLSITO_REQUIRE(config != nullptr && key != nullptr && value != nullptr, "null argument");
    config->cfg.set(key, value);
    return SLSITO_OK;
  });
}

slsito_status slsito_config_get(const slsito_config* config, const char* key, char* buffer, size_t capacity,
                                size_t* needed) {
  return guarded([&] {
    SLSITO_REQUIRE(config != nullptr && key != nullptr, "null argument");
    return copy_out(config->cfg.get(key), buffer, capacity, needed);
  });
}

slsito_status slsito_config_dump(const slsito_config* config, char* buffer, size_t capacity, size_t* needed) {
  return guarded([&] {
    SLSITO_REQUIRE(config != nullptr, "null argument");
    return copy_out(config->cfg.dump(), buffer, capacity, needed);
  });
}

slsito_status slsito_config_validate(const slsito_config* config) {
  return guarded([&] {
    SLSITO_REQUIRE(config != nullptr, "null argument");
    config->cfg.validate();
    return SLSITO_OK;
  });
}

slsito_status slsito_run(const slsito_config* config, slsito_summary** out) {
  return guarded([&] {
    SLSITO_REQUIRE(config != nullptr && out != nullptr, "null argument");
    auto* s = new slsito_summary{slsito::harness::run_experiment(config->cfg)};
    *out = s;
    return SLSITO_OK;
  });
}

void slsito_summary_destroy(slsito_summary* summary) { delete summary; }

int slsito_summary_passed(const slsito_summary* summary) {
  return summary != nullptr && summary->summary.passed() ? 1 : 0;
}

size_t slsito_summary_level_count(const slsito_summary* summary) {
  return summary == nullptr ? 0 : summary->summary.levels.size();
}

slsito_status slsito_summary_level(const slsito_summary* summary, size_t level, slsito_level_info* out) {
  return guarded([&] {
    SLSITO_REQUIRE(summary != nullptr && out != nullptr, "null argument");
    SLSITO_REQUIRE(level < summary->summary.levels.size(), "level out of range");
    const auto& l = summary->summary.levels[level];
    *out = {l.level, l.steps, l.spacing, l.eps, l.n_paths, l.excluded};
    return SLSITO_OK;
  });
}

slsito_status slsito_summary_column_count(const slsito_summary* summary, size_t level, size_t* out) {
  return guarded([&] {
    SLSITO_REQUIRE(summary != nullptr && out != nullptr, "null argument");
    SLSITO_REQUIRE(level < summary->summary.levels.size(), "level out of range");
    *out = summary->summary.levels[level].stats.size();
    return SLSITO_OK;
  });
}

slsito_status slsito_summary_column_name(const slsito_summary* summary, size_t level, size_t index,
                                         const char** out) {
  return guarded([&] {
    SLSITO_REQUIRE(summary != nullptr && out != nullptr, "null argument");
    SLSITO_REQUIRE(level < summary->summary.levels.size(), "level out of range");
    const auto& stats = summary->summary.levels[level].stats;
    SLSITO_REQUIRE(index < stats.size(), "column out of range");
    *out = stats[index].name.c_str();
    return SLSITO_OK;
  });
}

slsito_status slsito_summary_stat(const slsito_summary* summary, size_t level, const char* column,
                                  slsito_moments* out) {
  return guarded([&] {
    SLSITO_REQUIRE(summary != nullptr && column != nullptr && out != nullptr, "null argument");
    SLSITO_REQUIRE(level < summary->summary.levels.size(), "level out of range");
    const auto& m = summary->summary.levels[level].column(column);
    *out = {m.count, m.mean, m.se, m.median, m.mad};
    return SLSITO_OK;
  });
}

slsito_status slsito_summary_isometry(const slsito_summary* summary, size_t level, slsito_isometry* out) {
  return guarded([&] {
    SLSITO_REQUIRE(summary != nullptr && out != nullptr, "null argument");
    SLSITO_REQUIRE(level < summary->summary.levels.size(), "level out of range");
    const auto& iso = summary->summary.levels[level].isometry;
    SLSITO_REQUIRE(iso.has_value(), "level has no isometry report");
    *out = {iso->n_paths, iso->lhs, iso->se_lhs, iso->rhs, iso->se_rhs, iso->z};
    return SLSITO_OK;
  });
}

size_t slsito_summary_check_count(const slsito_summary* summary) {
  return summary == nullptr ? 0 : summary->summary.checks.size();
}

slsito_status slsito_summary_check(const slsito_summary* summary, size_t index, slsito_check* out) {
  return guarded([&] {
    SLSITO_REQUIRE(summary != nullptr && out != nullptr, "null argument");
    SLSITO_REQUIRE(index < summary->summary.checks.size(), "check out of range");
    const auto& c = summary->summary.checks[index];
    *out = {c.name.c_str(), c.value, c.threshold, c.pass ? 1 : 0};
    return SLSITO_OK;
  });
}

size_t slsito_summary_convergence_count(const slsito_summary* summary) {
  return summary == nullptr ? 0 : summary->summary.convergence.size();
}

slsito_status slsito_summary_convergence(const slsito_summary* summary, size_t index,
                                         slsito_convergence_row* out) {
  return guarded([&] {
    SLSITO_REQUIRE(summary != nullptr && out != nullptr, "null argument");
    SLSITO_REQUIRE(index < summary->summary.convergence.size(), "row out of range");
    const auto& r = summary->summary.convergence[index];
    *out = {r.level, r.steps, r.spacing, r.median_abs_residual, r.decay};
    return SLSITO_OK;
  });
}

size_t slsito_catalog_size(void) { return slsito::fn::catalog().size(); }

slsito_status slsito_catalog_entry(size_t index, slsito_catalog_info* out) {
  return guarded([&] {
    SLSITO_REQUIRE(out != nullptr, "null argument");
    const auto& cat = slsito::fn::catalog();
    SLSITO_REQUIRE(index < cat.size(), "catalog index out of range");
    const auto& e = cat[index];
    *out = {e.id.c_str(),
            e.description.c_str(),
            catalog_strings().formulas[index].c_str(),
            e.function.has_second_order() ? 1 : 0,
            e.split ? 1 : 0,
            e.curve ? 1 : 0,
            e.one_dimensional ? 1 : 0};
    return SLSITO_OK;
  });
}

size_t slsito_isometry_pair_count(void) { return slsito::fn::isometry_pairs().size(); }

slsito_status slsito_isometry_pair(size_t index, const char** id, const char** description) {
  return guarded([&] {
    SLSITO_REQUIRE(id != nullptr && description != nullptr, "null argument");
    const auto& pairs = slsito::fn::isometry_pairs();
    SLSITO_REQUIRE(index < pairs.size(), "pair index out of range");
    *id = pairs[index].id.c_str();
    *description = pairs[index].description.c_str();
    return SLSITO_OK;
  });
}

double slsito_mollifier_constant(void) { return slsito::fn::Mollifier::standard().constant(); }

slsito_status slsito_mollifier_value(double n, double x, double* out) {
  return guarded([&] {
    SLSITO_REQUIRE(out != nullptr, "null argument");
    *out = slsito::fn::mollifier_value(n, x);
    return SLSITO_OK;
  });
}

}  // extern "C"
