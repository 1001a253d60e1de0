#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "manifest.hpp"
#include "shiftdecon/combined_shift.hpp"
#include "shiftdecon/image.hpp"
#include "shiftdecon/netpbm.hpp"
#include "shiftdecon/signal_io.hpp"
#include "shiftdecon/step_shift.hpp"

namespace shiftdecon::cli {

namespace {

namespace fs = std::filesystem;

bool is_image_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  char magic[2] = {};
  in.read(magic, 2);
  return in.gcount() == 2 && magic[0] == 'P' && (magic[1] == '5' || magic[1] == '6');
}

Axis parse_axis(const std::string& s) {
  if (s == "x" || s == "X") return Axis::X;
  if (s == "y" || s == "Y") return Axis::Y;
  throw Error(ErrorKind::OffAxisMotion,
              "axis '" + s + "' is not x or y; rotate the image so the motion runs along an axis");
}

Method parse_method(const std::string& s) {
  if (s == "step") return Method::Step;
  if (s == "modified") return Method::Modified;
  return Method::Combined;
}

IndexRange parse_window(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) throw Error(ErrorKind::InvalidArgument, "window must be lo:hi");
  auto to_index = [&](std::string_view tok) {
    Index v = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc{} || ptr != tok.data() + tok.size()) {
      throw Error(ErrorKind::InvalidArgument, "bad window bound '" + std::string(tok) + "'");
    }
    return v;
  };
  return {to_index(std::string_view(s).substr(0, colon)), to_index(std::string_view(s).substr(colon + 1))};
}

std::vector<double> parse_values(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      v.push_back(parse_real(tok));
    } catch (const Error& e) {
      throw Error(ErrorKind::InvalidArgument, e.what());
    }
  }
  if (v.empty()) throw Error(ErrorKind::InvalidArgument, "--values needs at least one number");
  return v;
}

template <class Fn>
void write_text(const fs::path& path, Fn&& fn) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  fn(out);
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

std::string opt_text(const std::optional<Index>& v) { return v ? std::to_string(*v) : "default"; }

bool two_term(const Signal1D& s) {
  const auto v = s.values();
  return std::count_if(v.begin(), v.end(), [](double x) { return x != 0.0; }) == 2;
}

struct BlurArgs {
  std::string input, kernel, kernel_y, axis = "x", output;
};

struct DeblurArgs {
  std::string method, input, kernel, kernel_y, axis = "x", order = "xy", output, trace;
  std::string save_combination, combination;
  std::optional<Index> L, center, target;
  std::optional<int> steps;
  bool no_normalize = false;
  double divergence_factor = 1e6;
};

struct SynthArgs {
  double sigma = 0;
  std::optional<Index> radius;
  Index len = 0;
  std::string values, output;
  Index offset = 0;
  bool unit_sum = false;
};

struct NoiseArgs {
  double level = 0;
  std::uint64_t seed = 0;
  std::string input, output;
};

struct CompareArgs {
  std::string a, b, window, metric = "maxabs";
};

int do_blur(const BlurArgs& a, RunManifest& m) {
  m.add_input(a.input);
  m.add_input(a.kernel);
  const Signal1D S = read_signal_file(a.kernel);
  m.parameters["kernel"] = a.kernel;
  if (!is_image_file(a.input)) {
    if (!a.kernel_y.empty()) throw Error(ErrorKind::InvalidArgument, "--kernel-y needs an image input");
    write_signal_file(a.output, convolve(read_signal_file(a.input), S));
  } else {
    const ImageRaster img = read_netpbm_file(a.input);
    ImageRaster out = img;
    if (!a.kernel_y.empty()) {
      m.add_input(a.kernel_y);
      m.parameters["kernel_y"] = a.kernel_y;
      out = blur_axis(blur_axis(img, S, Axis::X), read_signal_file(a.kernel_y), Axis::Y);
    } else {
      const Axis axis = parse_axis(a.axis);
      m.parameters["axis"] = a.axis;
      out = blur_axis(img, S, axis);
    }
    write_netpbm_file(a.output, out);
  }
  write_manifest(a.output, m);
  return kOk;
}

void maybe_write_trace(const std::string& path, const IterationTrace& t) {
  if (!path.empty()) write_text(path, [&](std::ostream& o) { write_trace_csv(o, t); });
}

Signal1D deblur_signal(const DeblurArgs& a, const Signal1D& H, const Signal1D& S, std::ostream& out) {
  const Method method = parse_method(a.method);
  const bool normalize = !a.no_normalize;
  const Index M = static_cast<Index>(H.size()) - static_cast<Index>(S.size()) + 1;
  if (!a.kernel_y.empty()) throw Error(ErrorKind::InvalidArgument, "--kernel-y needs an image input");
  if (method != Method::Combined && (!a.combination.empty() || !a.save_combination.empty())) {
    throw Error(ErrorKind::InvalidArgument, "combination files apply to --method combined only");
  }

  if (method == Method::Step) {
    const Index target = a.target.value_or(std::max<Index>(M, 1));
    StepResult r;
    try {
      r = step_by_step(H, S, {target, a.divergence_factor, normalize});
    } catch (const DivergentError& e) {
      maybe_write_trace(a.trace, e.trace());
      throw;
    }
    maybe_write_trace(a.trace, r.trace);
    if (r.trace.diverged) {
      throw Error(ErrorKind::Divergent,
                  "step-by-step iteration diverged after " + std::to_string(r.trace.reconstructed_len) +
                      " of " + std::to_string(target) + " coefficients (M_max exceeded)");
    }
    return r.estimate;
  }

  if (method == Method::Modified) {
    if (!two_term(S) && is_boxcar(S)) {
      const ImageRaster line(static_cast<Index>(H.size()), 1, 1,
                             std::vector<double>(H.values().begin(), H.values().end()));
      const MotionDeblurResult r = motion_deblur(line, S, Axis::X, a.steps, a.divergence_factor);
      out << "steps_used=" << r.steps_used << '\n';
      return Signal1D(H.offset() - S.offset(), r.image.line(Axis::X, 0, 0));
    }
    StepResult r;
    try {
      r = deconvolve_two_term(H, S, a.steps, {a.divergence_factor, normalize, std::nullopt});
    } catch (const DivergentError& e) {
      maybe_write_trace(a.trace, e.trace());
      throw;
    }
    maybe_write_trace(a.trace, r.trace);
    out << "steps_used=" << r.trace.steps.size() << '\n';
    return r.estimate;
  }

  ShiftCombination comb;
  Signal1D est;
  if (!a.combination.empty()) {
    std::ifstream in(a.combination, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + a.combination);
    comb = read_combination_csv(in);
    if (M < 1) throw Error(ErrorKind::IncompleteResponse, "response is shorter than the kernel");
    if (comb.half_width <= M) {
      throw Error(ErrorKind::HalfWidthTooSmall, "stored L = " + std::to_string(comb.half_width) +
                                                    " must exceed M = " + std::to_string(M));
    }
    if (comb.center < 0 || comb.center >= static_cast<Index>(S.size())) {
      throw Error(ErrorKind::BadCenter, "stored center lies outside the kernel support");
    }
    est = extract_response(H, S, comb, H.offset() - S.offset(), M);
  } else {
    CombinedResult r = combined_deconvolve(H, S, {a.L, a.center});
    comb = std::move(r.combination);
    est = std::move(r.estimate);
  }
  if (!a.save_combination.empty()) {
    write_text(a.save_combination, [&](std::ostream& o) { write_combination_csv(o, comb); });
  }
  return est;
}

ImageRaster deblur_image(const DeblurArgs& a, const ImageRaster& img, const Signal1D& S,
                         RunManifest& m, std::ostream& out) {
  const Method method = parse_method(a.method);
  if (!a.combination.empty() || !a.save_combination.empty() || !a.trace.empty()) {
    throw Error(ErrorKind::InvalidArgument, "--trace and combination files apply to signal inputs only");
  }
  const DeblurOptions opts{a.divergence_factor, !a.no_normalize, a.L, a.center, a.steps};
  if (!a.kernel_y.empty()) {
    m.add_input(a.kernel_y);
    m.parameters["kernel_y"] = a.kernel_y;
    m.parameters["order"] = a.order;
    const SeparableKernel2D k{S, read_signal_file(a.kernel_y)};
    return deblur_separable(img, k, a.order == "yx" ? Order::YThenX : Order::XThenY, method, opts);
  }
  const Axis axis = parse_axis(a.axis);
  m.parameters["axis"] = a.axis;
  if (method == Method::Modified && !two_term(S) && is_boxcar(S)) {
    MotionDeblurResult r = motion_deblur(img, S, axis, a.steps, a.divergence_factor);
    out << "steps_used=" << r.steps_used << '\n';
    return std::move(r.image);
  }
  ImageRaster res = deblur_axis(img, S, axis, method, opts);
  if (method == Method::Modified) {
    out << "steps_used="
        << a.steps.value_or(doubling_steps(res.extent(axis), static_cast<Index>(S.size()) - 1)) << '\n';
  }
  return res;
}

int do_deblur(const DeblurArgs& a, RunManifest& m, std::ostream& out) {
  m.add_input(a.input);
  m.add_input(a.kernel);
  if (!a.combination.empty()) m.add_input(a.combination);
  m.parameters["method"] = a.method;
  m.parameters["kernel"] = a.kernel;
  m.parameters["L"] = opt_text(a.L);
  m.parameters["center"] = opt_text(a.center);
  m.parameters["steps"] = a.steps ? std::to_string(*a.steps) : "default";
  m.parameters["normalize"] = a.no_normalize ? "false" : "true";
  m.parameters["divergence_factor"] = format_real(a.divergence_factor);

  const Signal1D S = read_signal_file(a.kernel);
  if (is_image_file(a.input)) {
    write_netpbm_file(a.output, deblur_image(a, read_netpbm_file(a.input), S, m, out));
  } else {
    if (a.target) m.parameters["target"] = std::to_string(*a.target);
    write_signal_file(a.output, deblur_signal(a, read_signal_file(a.input), S, out));
  }
  write_manifest(a.output, m);
  return kOk;
}

int do_synth(const std::string& kind, const SynthArgs& a, RunManifest& m, std::ostream& out) {
  Signal1D k;
  m.parameters["kind"] = kind;
  if (kind == "gaussian") {
    const Index radius =
        a.radius.value_or(std::max<Index>(1, static_cast<Index>(std::ceil(3.0 * a.sigma))));
    m.parameters["sigma"] = format_real(a.sigma);
    m.parameters["radius"] = std::to_string(radius);
    k = make_gaussian_kernel(a.sigma, radius);
  } else if (kind == "boxcar") {
    m.parameters["len"] = std::to_string(a.len);
    k = make_boxcar_kernel(a.len);
  } else {
    m.parameters["values"] = a.values;
    m.parameters["offset"] = std::to_string(a.offset);
    k = Signal1D(a.offset, parse_values(a.values));
  }
  if (a.unit_sum) {
    double sum = 0.0;
    for (double v : k.values()) sum += v;
    if (sum == 0.0) throw Error(ErrorKind::InvalidArgument, "cannot normalize a kernel with zero sum");
    k = scale(k, 1.0 / sum);
    m.parameters["unit_sum"] = "true";
  }
  if (a.output.empty()) {
    write_signal(out, k);
    return kOk;
  }
  write_signal_file(a.output, k);
  write_manifest(a.output, m);
  return kOk;
}

int do_noise(const NoiseArgs& a, RunManifest& m) {
  m.add_input(a.input);
  m.seed = a.seed;
  m.parameters["level"] = format_real(a.level);
  const NoiseSpec spec{a.level, a.seed};
  if (is_image_file(a.input)) {
    write_netpbm_file(a.output, add_noise(read_netpbm_file(a.input), spec));
  } else {
    write_signal_file(a.output, add_noise(read_signal_file(a.input), spec));
  }
  write_manifest(a.output, m);
  return kOk;
}

double dynamic_range(std::span<const double> v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi - *lo;
}

int do_compare(const CompareArgs& a, std::ostream& out) {
  const bool img_a = is_image_file(a.a);
  if (img_a != is_image_file(a.b)) {
    throw Error(ErrorKind::InvalidArgument, "cannot compare a signal with an image");
  }
  double value = 0.0;
  if (img_a) {
    if (!a.window.empty()) throw Error(ErrorKind::InvalidArgument, "--window applies to signals only");
    const ImageRaster A = read_netpbm_file(a.a);
    const ImageRaster B = read_netpbm_file(a.b);
    if (a.metric == "rms") {
      value = rms_error(A, B);
    } else {
      value = max_abs_error(A, B);
      if (a.metric == "rel") {
        const double range = dynamic_range(A.samples());
        if (range > 0.0) value /= range;
      }
    }
  } else {
    const Signal1D A = read_signal_file(a.a);
    const Signal1D B = read_signal_file(a.b);
    std::optional<IndexRange> w;
    if (!a.window.empty()) w = parse_window(a.window);
    if (a.metric == "rms") {
      value = rms_error(A, B, w);
    } else {
      value = max_abs_error(A, B, w);
      if (a.metric == "rel") {
        const double range = dynamic_range(A.values());
        if (range > 0.0) value /= range;
      }
    }
  }
  out << format_real(value) << '\n';
  return kOk;
}

}  // namespace

int exit_code_for(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Format:
    case ErrorKind::Io:
      return kIo;
    case ErrorKind::Divergent:
    case ErrorKind::SingularShiftMatrix:
    case ErrorKind::HalfWidthTooSmall:
    case ErrorKind::IncompleteResponse:
    case ErrorKind::BlurWiderThanImage:
    case ErrorKind::LeadingZeroKernel:
    case ErrorKind::RankDeficient:
      return kNumerical;
    case ErrorKind::InvalidArgument:
    case ErrorKind::KernelShape:
    case ErrorKind::BadCenter:
    case ErrorKind::OffAxisMotion:
    case ErrorKind::EmptyWindow:
      return kUsage;
  }
  return kUsage;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Direct non-blind deconvolution by kernel shifts", "shiftdecon"};
  app.require_subcommand(1);

  BlurArgs blur;
  auto* blur_cmd = app.add_subcommand("blur", "Convolve a signal or image with a kernel");
  blur_cmd->add_option("--input", blur.input, "signal CSV or PGM/PPM")->required();
  blur_cmd->add_option("--kernel", blur.kernel, "kernel CSV")->required();
  blur_cmd->add_option("--kernel-y", blur.kernel_y, "second kernel, applied along y after --kernel along x");
  blur_cmd->add_option("--axis", blur.axis, "x or y (images)");
  blur_cmd->add_option("--output", blur.output)->required();

  DeblurArgs deblur;
  auto* deblur_cmd = app.add_subcommand("deblur", "Deconvolve a signal or image");
  deblur_cmd->add_option("--method", deblur.method)
      ->required()
      ->check(CLI::IsMember({"step", "modified", "combined"}));
  deblur_cmd->add_option("--input", deblur.input)->required();
  deblur_cmd->add_option("--kernel", deblur.kernel)->required();
  deblur_cmd->add_option("--kernel-y", deblur.kernel_y);
  deblur_cmd->add_option("--axis", deblur.axis);
  deblur_cmd->add_option("--order", deblur.order)->check(CLI::IsMember({"xy", "yx"}));
  deblur_cmd->add_option("--L", deblur.L, "combined: half-width L (default M+1)");
  deblur_cmd->add_option("--center", deblur.center, "combined: center C (default argmax |s|)");
  deblur_cmd->add_option("--steps", deblur.steps, "modified: doubling steps");
  deblur_cmd->add_option("--target", deblur.target, "step: coefficients to reconstruct (default M)");
  deblur_cmd->add_option("--divergence-factor", deblur.divergence_factor);
  deblur_cmd->add_flag("--no-normalize", deblur.no_normalize, "return s0*h instead of h");
  deblur_cmd->add_option("--output", deblur.output)->required();
  deblur_cmd->add_option("--trace", deblur.trace, "iteration trace CSV");
  deblur_cmd->add_option("--save-combination", deblur.save_combination);
  deblur_cmd->add_option("--combination", deblur.combination, "reuse a saved combination");

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "Write a kernel CSV");
  synth_cmd->require_subcommand(1);
  auto common = [&](CLI::App* c) {
    c->add_option("--output", synth.output, "kernel CSV (stdout when omitted)");
    c->add_flag("--unit-sum", synth.unit_sum, "scale coefficients to sum to 1");
  };
  auto* gauss_cmd = synth_cmd->add_subcommand("gaussian", "exp(-k^2/(2 sigma^2)), peak 1");
  gauss_cmd->add_option("--sigma", synth.sigma)->required();
  gauss_cmd->add_option("--radius", synth.radius, "default ceil(3 sigma)");
  common(gauss_cmd);
  auto* box_cmd = synth_cmd->add_subcommand("boxcar", "len equal coefficients 1/len");
  box_cmd->add_option("--len", synth.len)->required();
  common(box_cmd);
  auto* custom_cmd = synth_cmd->add_subcommand("custom", "explicit coefficients");
  custom_cmd->add_option("--values", synth.values, "comma-separated")->required();
  custom_cmd->add_option("--offset", synth.offset);
  common(custom_cmd);

  NoiseArgs noise;
  auto* noise_cmd = app.add_subcommand("noise", "Add seeded Gaussian noise");
  noise_cmd->add_option("--level", noise.level, "sigma as a fraction of max |x|")->required();
  noise_cmd->add_option("--seed", noise.seed);
  noise_cmd->add_option("--input", noise.input)->required();
  noise_cmd->add_option("--output", noise.output)->required();

  CompareArgs cmp;
  auto* cmp_cmd = app.add_subcommand("compare", "Print an error metric between two files");
  cmp_cmd->add_option("a", cmp.a)->required();
  cmp_cmd->add_option("b", cmp.b)->required();
  cmp_cmd->add_option("--window", cmp.window, "lo:hi (signals)");
  cmp_cmd->add_option("--metric", cmp.metric)->check(CLI::IsMember({"maxabs", "rms", "rel"}));

  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << "ERROR Usage: " << e.what() << '\n';
    return kUsage;
  }

  RunManifest m;
  m.args = args;
  try {
    if (*blur_cmd) return do_blur(blur, m);
    if (*deblur_cmd) return do_deblur(deblur, m, out);
    if (*synth_cmd) {
      const std::string kind = *gauss_cmd ? "gaussian" : *box_cmd ? "boxcar" : "custom";
      return do_synth(kind, synth, m, out);
    }
    if (*noise_cmd) return do_noise(noise, m);
    return do_compare(cmp, out);
  } catch (const Error& e) {
    err << "ERROR " << e.name() << ": " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "ERROR Io: " << e.what() << '\n';
    return kIo;
  }
}

}  // namespace shiftdecon::cli
