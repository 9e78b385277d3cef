#include "tpctf/tpctf.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "tpctf/error.hpp"
#include "tpctf/experiment.hpp"
#include "tpctf/filterbank.hpp"
#include "tpctf/image_io.hpp"
#include "tpctf/inpaint.hpp"
#include "tpctf/metrics.hpp"
#include "tpctf/synthetic.hpp"
#include "tpctf/verify.hpp"

struct tpctf_image {
  tpctf::RealGrid grid;
};

struct tpctf_mask {
  tpctf::Mask mask;
};

namespace {

thread_local std::string g_last_error;

tpctf_status fail(tpctf_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

// Runs f, mapping library exceptions to status codes.
template <class F>
tpctf_status guarded(F&& f) {
  try {
    g_last_error.clear();
    f();
    return TPCTF_OK;
  } catch (const tpctf::ParseError& e) {
    return fail(TPCTF_ERR_PARSE, e.what());
  } catch (const tpctf::ConfigError& e) {
    return fail(TPCTF_ERR_CONFIG, e.what());
  } catch (const tpctf::StructuralError& e) {
    return fail(TPCTF_ERR_STRUCTURE, e.what());
  } catch (const tpctf::DataError& e) {
    return fail(TPCTF_ERR_DATA, e.what());
  } catch (const tpctf::IoError& e) {
    return fail(TPCTF_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(TPCTF_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(TPCTF_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(TPCTF_ERR_INTERNAL, "unknown error");
  }
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

tpctf_status null_argument(const char* name) { return fail(TPCTF_ERR_ARGUMENT, std::string(name) + " is null"); }

}  // namespace

extern "C" {

const char* tpctf_version(void) { return "0.1.0"; }

const char* tpctf_status_string(tpctf_status status) {
  switch (status) {
    case TPCTF_OK: return "ok";
    case TPCTF_ERR_ARGUMENT: return "invalid argument";
    case TPCTF_ERR_CONFIG: return "configuration error";
    case TPCTF_ERR_STRUCTURE: return "structural error";
    case TPCTF_ERR_DATA: return "data error";
    case TPCTF_ERR_IO: return "i/o error";
    case TPCTF_ERR_PARSE: return "parse error";
    case TPCTF_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* tpctf_last_error(void) { return g_last_error.c_str(); }

void tpctf_string_free(char* s) { std::free(s); }

tpctf_status tpctf_image_create(int width, int height, const double* pixels, tpctf_image** out) {
  if (!out) return null_argument("out");
  if (width < 1 || height < 1) return fail(TPCTF_ERR_ARGUMENT, "image dimensions must be positive");
  return guarded([&] {
    auto img = new tpctf_image{tpctf::RealGrid(height, width, 0.0)};
    if (pixels) std::memcpy(img->grid.data(), pixels, img->grid.size() * sizeof(double));
    *out = img;
  });
}

tpctf_status tpctf_image_load(const char* path, tpctf_image** out) {
  if (!path) return null_argument("path");
  if (!out) return null_argument("out");
  return guarded([&] { *out = new tpctf_image{tpctf::load_pgm(path)}; });
}

tpctf_status tpctf_image_save(const tpctf_image* image, const char* path) {
  if (!image) return null_argument("image");
  if (!path) return null_argument("path");
  return guarded([&] { tpctf::save_pgm(image->grid, path); });
}

tpctf_status tpctf_fixture(const char* name, int width, int height, tpctf_image** out) {
  if (!name) return null_argument("name");
  if (!out) return null_argument("out");
  if (width < 1 || height < 1) return fail(TPCTF_ERR_ARGUMENT, "image dimensions must be positive");
  return guarded([&] { *out = new tpctf_image{tpctf::make_fixture(name, height, width)}; });
}

void tpctf_image_free(tpctf_image* image) { delete image; }

int tpctf_image_width(const tpctf_image* image) { return image ? image->grid.cols() : 0; }
int tpctf_image_height(const tpctf_image* image) { return image ? image->grid.rows() : 0; }
const double* tpctf_image_data(const tpctf_image* image) { return image ? image->grid.data() : nullptr; }

tpctf_status tpctf_mask_load(const char* path, tpctf_mask** out) {
  if (!path) return null_argument("path");
  if (!out) return null_argument("out");
  return guarded([&] { *out = new tpctf_mask{tpctf::load_mask(path)}; });
}

tpctf_status tpctf_mask_save(const tpctf_mask* mask, const char* path) {
  if (!mask) return null_argument("mask");
  if (!path) return null_argument("path");
  return guarded([&] { tpctf::save_mask(mask->mask, path); });
}

tpctf_status tpctf_mask_random(int width, int height, double rate, uint64_t seed, tpctf_mask** out) {
  if (!out) return null_argument("out");
  return guarded([&] { *out = new tpctf_mask{tpctf::gen_random_mask(width, height, rate, seed)}; });
}

void tpctf_mask_free(tpctf_mask* mask) { delete mask; }

double tpctf_mask_missing_ratio(const tpctf_mask* mask) { return mask ? mask->mask.missing_ratio() : 0.0; }

tpctf_status tpctf_add_noise(const tpctf_image* image, double sigma, uint64_t seed, tpctf_image** out) {
  if (!image) return null_argument("image");
  if (!out) return null_argument("out");
  return guarded([&] { *out = new tpctf_image{tpctf::add_gaussian_noise(image->grid, sigma, seed)}; });
}

tpctf_status tpctf_psnr(const tpctf_image* reference, const tpctf_image* test, double* out) {
  if (!reference) return null_argument("reference");
  if (!test) return null_argument("test");
  if (!out) return null_argument("out");
  return guarded([&] { *out = tpctf::psnr(reference->grid, test->grid); });
}

void tpctf_inpaint_options_init(tpctf_inpaint_options* options) {
  if (!options) return;
  tpctf::InpaintConfig d;
  options->sigma = d.sigma;
  options->levels = d.levels;
  options->max_iterations = d.max_iterations;
  options->paste_observed = d.paste_observed ? 1 : 0;
}

tpctf_status tpctf_inpaint(const tpctf_image* observed, const tpctf_mask* mask, const tpctf_inpaint_options* options,
                           tpctf_image** out, tpctf_inpaint_info* info) {
  if (!observed) return null_argument("observed");
  if (!mask) return null_argument("mask");
  if (!out) return null_argument("out");
  return guarded([&] {
    tpctf::InpaintConfig cfg;
    if (options) {
      cfg.sigma = options->sigma;
      cfg.levels = options->levels;
      cfg.max_iterations = options->max_iterations;
      cfg.paste_observed = options->paste_observed != 0;
    }
    tpctf::InpaintResult r = tpctf::inpaint(observed->grid, mask->mask, cfg);
    if (info) {
      info->iterations = r.iterations;
      info->thresholds_completed = r.thresholds_completed;
      info->hit_iteration_cap = r.hit_iteration_cap ? 1 : 0;
      info->levels = r.levels;
      info->final_error = r.final_error;
      info->missing_ratio = r.missing_ratio;
    }
    *out = new tpctf_image{std::move(r.image)};
  });
}

void tpctf_experiment_spec_init(tpctf_experiment_spec* spec) {
  if (!spec) return;
  tpctf::ExperimentSpec d;
  std::memset(spec, 0, sizeof *spec);
  spec->mask_rate = d.mask_rate;
  spec->mask_seed = d.mask_seed;
  spec->sigma = d.sigma;
  spec->seed = d.seed;
  spec->algorithm = "tpctf6";
  spec->levels = d.levels;
  spec->paste_observed = d.paste_observed ? 1 : 0;
  spec->max_iterations = d.max_iterations;
}

tpctf_status tpctf_run_experiment(const tpctf_experiment_spec* spec, tpctf_experiment_result* result,
                                  char** report_line) {
  if (!spec) return null_argument("spec");
  if (!spec->image && !spec->image_path) return fail(TPCTF_ERR_ARGUMENT, "spec needs an image or an image path");
  return guarded([&] {
    tpctf::ExperimentSpec s;
    if (spec->image) s.image = spec->image->grid;
    if (spec->image_path) s.image_path = spec->image_path;
    if (spec->image_name) s.image_name = spec->image_name;
    if (spec->mask_path) s.mask_path = spec->mask_path;
    s.mask_rate = spec->mask_rate;
    s.mask_seed = spec->mask_seed;
    s.sigma = spec->sigma;
    s.seed = spec->seed;
    s.algorithm = tpctf::parse_algorithm(spec->algorithm ? spec->algorithm : "tpctf6");
    s.levels = spec->levels;
    s.paste_observed = spec->paste_observed != 0;
    s.max_iterations = spec->max_iterations;
    if (spec->output_path) s.output_path = spec->output_path;
    if (spec->observed_path) s.observed_path = spec->observed_path;
    tpctf::ExperimentReport r = tpctf::run_experiment(s);
    char* line = report_line ? copy_string(r.line()) : nullptr;
    if (result) {
      result->psnr = r.psnr;
      result->iterations = r.iterations;
      result->hit_iteration_cap = r.hit_iteration_cap ? 1 : 0;
      result->seconds = r.seconds;
    }
    if (report_line) *report_line = line;
  });
}

tpctf_status tpctf_verify(const char* what, uint64_t seed, int count, int* passed, char** report) {
  if (!what) return null_argument("what");
  const std::string w = what;
  if (w != "bank" && w != "transform" && w != "grouping")
    return fail(TPCTF_ERR_ARGUMENT, "unknown verification '" + w + "' (expected bank, transform or grouping)");
  if (count < 1) return fail(TPCTF_ERR_ARGUMENT, "count must be positive");
  return guarded([&] {
    tpctf::VerifyOutcome o;
    if (w == "bank")
      o = tpctf::verify_banks();
    else if (w == "transform")
      o = tpctf::verify_transforms(seed, count);
    else
      o = tpctf::verify_grouping_instances(seed, count);
    char* text = report ? copy_string(o.text) : nullptr;
    if (passed) *passed = o.passed ? 1 : 0;
    if (report) *report = text;
  });
}

tpctf_status tpctf_describe_bank(const char* family, char** text) {
  if (!family) return null_argument("family");
  if (!text) return null_argument("text");
  return guarded([&] {
    const std::string f = family;
    tpctf::FilterBank2D bank;
    if (f == "tpctf6")
      bank = tpctf::build_tpctf6();
    else if (f == "spline")
      bank = tpctf::build_spline_bank(tpctf::SplineVariant::cubic);
    else if (f == "dct")
      bank = tpctf::build_dct_bank(7);
    else
      throw tpctf::ConfigError("unknown bank family '" + f + "' (expected tpctf6, spline or dct)");
    *text = copy_string(tpctf::describe_bank(bank));
  });
}

}  // extern "C"
