// Command-line front end. Talks to the library only through the C API.
#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>

#include "tpctf/tpctf.h"

namespace {

// Thrown on a failed library call; carries the one-line diagnostic.
struct CallFailed {
  std::string message;
};

void check(tpctf_status s, const char* what) {
  if (s != TPCTF_OK) throw CallFailed{std::string(what) + ": " + tpctf_last_error()};
}

template <class T, void (*Free)(T*)>
struct Handle {
  T* p = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { Free(p); }
  T** out() { return &p; }
  T* get() const { return p; }
};

using Image = Handle<tpctf_image, tpctf_image_free>;
using MaskHandle = Handle<tpctf_mask, tpctf_mask_free>;

struct OwnedString {
  char* p = nullptr;
  ~OwnedString() { tpctf_string_free(p); }
};

void print_psnr(double v) {
  if (std::isinf(v))
    std::printf("psnr inf\n");
  else
    std::printf("psnr %.4f\n", v);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Image inpainting with directional complex tight framelets"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(tpctf_version()));

  // inpaint
  struct {
    std::string image, mask, out, ref;
    double sigma = 0.0;
    std::uint64_t seed = 1;
    int levels = 0;
    int max_iterations = 2000;
    bool paste = false;
  } ip;
  auto* inpaint = app.add_subcommand("inpaint", "Restore the missing pixels of an image");
  inpaint->add_option("--image", ip.image, "Observed image (PGM)")->required()->check(CLI::ExistingFile);
  inpaint->add_option("--mask", ip.mask, "Mask (PGM, >= 128 observed)")->required()->check(CLI::ExistingFile);
  inpaint->add_option("--sigma", ip.sigma, "Noise standard deviation")->check(CLI::NonNegativeNumber);
  inpaint->add_option("--seed", ip.seed, "Seed recorded with the run");
  inpaint->add_option("--levels", ip.levels, "Decomposition levels (0: automatic)")->check(CLI::NonNegativeNumber);
  inpaint->add_option("--max-iterations", ip.max_iterations, "Iteration cap")->check(CLI::PositiveNumber);
  inpaint->add_flag("--paste-observed", ip.paste, "Copy observed pixels into the result");
  inpaint->add_option("--out", ip.out, "Restored image (PGM)")->required();
  inpaint->add_option("--ref", ip.ref, "Clean reference; prints the PSNR")->check(CLI::ExistingFile);

  // gen-mask
  struct {
    int width = 0, height = 0;
    double rate = 0.5;
    std::uint64_t seed = 1;
    std::string out;
  } gm;
  auto* gen_mask = app.add_subcommand("gen-mask", "Write a random missing-pixel mask");
  gen_mask->add_option("--width", gm.width)->required()->check(CLI::PositiveNumber);
  gen_mask->add_option("--height", gm.height)->required()->check(CLI::PositiveNumber);
  gen_mask->add_option("--rate", gm.rate, "Missing probability in (0, 1)")->required();
  gen_mask->add_option("--seed", gm.seed)->required();
  gen_mask->add_option("--out", gm.out)->required();

  // add-noise
  struct {
    std::string image, out;
    double sigma = 0.0;
    std::uint64_t seed = 1;
  } an;
  auto* add_noise = app.add_subcommand("add-noise", "Add Gaussian noise (no clamping before saving)");
  add_noise->add_option("--image", an.image)->required()->check(CLI::ExistingFile);
  add_noise->add_option("--sigma", an.sigma)->required()->check(CLI::NonNegativeNumber);
  add_noise->add_option("--seed", an.seed)->required();
  add_noise->add_option("--out", an.out)->required();

  // psnr
  struct {
    std::string ref, test;
  } ps;
  auto* psnr = app.add_subcommand("psnr", "Peak signal-to-noise ratio of two images");
  psnr->add_option("--ref", ps.ref)->required();
  psnr->add_option("--test", ps.test)->required();

  // verify
  struct {
    std::string what;
    std::uint64_t seed = 1;
    int count = 0;
  } vf;
  auto* verify = app.add_subcommand("verify", "Run the built-in property checks");
  verify->add_option("what", vf.what, "bank, transform or grouping")
      ->required()
      ->check(CLI::IsMember({"bank", "transform", "grouping"}));
  verify->add_option("--seed", vf.seed);
  verify->add_option("--count", vf.count, "Random instances (default 100 transforms, 200 problems)")
      ->check(CLI::PositiveNumber);

  // experiment
  struct {
    std::string image, fixture, mask, algorithm = "tpctf6", out, observed_out;
    int size = 256, levels = 0, max_iterations = 2000;
    double rate = 0.5, sigma = 0.0;
    std::uint64_t mask_seed = 1, seed = 1;
    bool paste = false;
  } ex;
  auto* experiment = app.add_subcommand("experiment", "Degrade, restore and score one image");
  auto* ex_image = experiment->add_option("--image", ex.image, "Clean image (PGM)")->check(CLI::ExistingFile);
  auto* ex_fixture = experiment->add_option("--fixture", ex.fixture, "Built-in test image instead of --image");
  ex_image->excludes(ex_fixture);
  experiment->add_option("--size", ex.size, "Fixture side length")->check(CLI::PositiveNumber);
  experiment->add_option("--mask", ex.mask, "Mask file instead of a random mask")->check(CLI::ExistingFile);
  experiment->add_option("--rate", ex.rate, "Random mask missing rate");
  experiment->add_option("--mask-seed", ex.mask_seed);
  experiment->add_option("--sigma", ex.sigma)->check(CLI::NonNegativeNumber);
  experiment->add_option("--seed", ex.seed, "Noise seed");
  experiment->add_option("--algorithm", ex.algorithm)->check(CLI::IsMember({"tpctf6", "spline", "dct"}));
  experiment->add_option("--levels", ex.levels)->check(CLI::NonNegativeNumber);
  experiment->add_option("--max-iterations", ex.max_iterations)->check(CLI::PositiveNumber);
  experiment->add_flag("--paste-observed", ex.paste);
  experiment->add_option("--out", ex.out, "Restored image (PGM)");
  experiment->add_option("--observed-out", ex.observed_out, "Degraded input (PGM)");

  // describe-bank
  std::string family = "tpctf6";
  auto* describe = app.add_subcommand("describe-bank", "Print the filters of a bank");
  describe->add_option("family", family)->check(CLI::IsMember({"tpctf6", "spline", "dct"}));

  // fixture
  struct {
    std::string name, out;
    int size = 64;
  } fx;
  auto* fixture = app.add_subcommand("fixture", "Write a built-in test image");
  fixture->add_option("--name", fx.name)->required();
  fixture->add_option("--size", fx.size)->check(CLI::PositiveNumber);
  fixture->add_option("--out", fx.out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }

  try {
    if (*inpaint) {
      Image y, restored;
      MaskHandle m;
      check(tpctf_image_load(ip.image.c_str(), y.out()), "load image");
      check(tpctf_mask_load(ip.mask.c_str(), m.out()), "load mask");
      tpctf_inpaint_options opt;
      tpctf_inpaint_options_init(&opt);
      opt.sigma = ip.sigma;
      opt.levels = ip.levels;
      opt.max_iterations = ip.max_iterations;
      opt.paste_observed = ip.paste ? 1 : 0;
      tpctf_inpaint_info info;
      check(tpctf_inpaint(y.get(), m.get(), &opt, restored.out(), &info), "inpaint");
      check(tpctf_image_save(restored.get(), ip.out.c_str()), "save image");
      std::printf("iterations %d thresholds %d levels %d missing %.4f seed %llu%s\n", info.iterations,
                  info.thresholds_completed, info.levels, info.missing_ratio,
                  static_cast<unsigned long long>(ip.seed), info.hit_iteration_cap ? " (iteration cap reached)" : "");
      if (!ip.ref.empty()) {
        Image ref;
        double v = 0.0;
        check(tpctf_image_load(ip.ref.c_str(), ref.out()), "load reference");
        check(tpctf_psnr(ref.get(), restored.get(), &v), "psnr");
        print_psnr(v);
      }
    } else if (*gen_mask) {
      MaskHandle m;
      check(tpctf_mask_random(gm.width, gm.height, gm.rate, gm.seed, m.out()), "gen-mask");
      check(tpctf_mask_save(m.get(), gm.out.c_str()), "save mask");
      std::printf("missing %.4f\n", tpctf_mask_missing_ratio(m.get()));
    } else if (*add_noise) {
      Image x, y;
      check(tpctf_image_load(an.image.c_str(), x.out()), "load image");
      check(tpctf_add_noise(x.get(), an.sigma, an.seed, y.out()), "add-noise");
      check(tpctf_image_save(y.get(), an.out.c_str()), "save image");
    } else if (*psnr) {
      Image a, b;
      double v = 0.0;
      check(tpctf_image_load(ps.ref.c_str(), a.out()), "load reference");
      check(tpctf_image_load(ps.test.c_str(), b.out()), "load test image");
      check(tpctf_psnr(a.get(), b.get(), &v), "psnr");
      print_psnr(v);
    } else if (*verify) {
      int count = vf.count;
      if (count == 0) count = vf.what == "grouping" ? 200 : 100;
      int passed = 0;
      OwnedString text;
      check(tpctf_verify(vf.what.c_str(), vf.seed, count, &passed, &text.p), "verify");
      std::fputs(text.p, stdout);
      std::printf("%s\n", passed ? "PASS" : "FAIL");
      return passed ? 0 : 1;
    } else if (*experiment) {
      if (ex.image.empty() && ex.fixture.empty()) throw CallFailed{"experiment: --image or --fixture is required"};
      Image fixture_image;
      tpctf_experiment_spec spec;
      tpctf_experiment_spec_init(&spec);
      std::string label;
      if (!ex.fixture.empty()) {
        check(tpctf_fixture(ex.fixture.c_str(), ex.size, ex.size, fixture_image.out()), "fixture");
        spec.image = fixture_image.get();
        label = ex.fixture + std::to_string(ex.size);
        spec.image_name = label.c_str();
      } else {
        spec.image_path = ex.image.c_str();
      }
      if (!ex.mask.empty()) spec.mask_path = ex.mask.c_str();
      spec.mask_rate = ex.rate;
      spec.mask_seed = ex.mask_seed;
      spec.sigma = ex.sigma;
      spec.seed = ex.seed;
      spec.algorithm = ex.algorithm.c_str();
      spec.levels = ex.levels;
      spec.paste_observed = ex.paste ? 1 : 0;
      spec.max_iterations = ex.max_iterations;
      if (!ex.out.empty()) spec.output_path = ex.out.c_str();
      if (!ex.observed_out.empty()) spec.observed_path = ex.observed_out.c_str();
      tpctf_experiment_result res;
      OwnedString line;
      check(tpctf_run_experiment(&spec, &res, &line.p), "experiment");
      std::printf("%s\n", line.p);
    } else if (*describe) {
      OwnedString text;
      check(tpctf_describe_bank(family.c_str(), &text.p), "describe-bank");
      std::fputs(text.p, stdout);
    } else if (*fixture) {
      Image img;
      check(tpctf_fixture(fx.name.c_str(), fx.size, fx.size, img.out()), "fixture");
      check(tpctf_image_save(img.get(), fx.out.c_str()), "save image");
    }
  } catch (const CallFailed& e) {
    std::fprintf(stderr, "error: %s\n", e.message.c_str());
    return 1;
  }
  return 0;
}
