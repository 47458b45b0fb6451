// Command-line front end: adorn <command> [scene] [flags]

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include "adorn/area.hpp"
#include "adorn/gallery.hpp"
#include "adorn/render.hpp"
#include "adorn/rigidity.hpp"
#include "adorn/scene.hpp"
#include "adorn/unfold.hpp"

using namespace adorn;

namespace {

struct Flags {
  double tol = Tolerance{}.eps_geom;
  double overlap_tol = Tolerance{}.eps_overlap;
  double dt = UnfoldOptions{}.dt_init;
  double dt_min = UnfoldOptions{}.dt_min;
  int max_steps = UnfoldOptions{}.max_steps;
  double straightness_tol = UnfoldOptions{}.straightness_tol;
  std::uint64_t seed = 1;
  int trials = ProbeOptions{}.trials;
  double delta = 0.01;
  int sweep_steps = 200;
  std::string out;
  bool frames = false;
  std::string scene;

  Tolerance tolerance() const {
    Tolerance t{tol, overlap_tol};
    t.check();
    return t;
  }
  UnfoldOptions unfold() const {
    UnfoldOptions o;
    o.dt_init = dt;
    o.dt_min = dt_min;
    o.dt_max = std::max(o.dt_max, dt);
    o.max_steps = max_steps;
    o.straightness_tol = straightness_tol;
    o.tol = tolerance();
    o.check();
    return o;
  }
};

// Signals bad input: exit code 2.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Scene load(const std::string& arg) {
  if (arg.empty()) throw InputError("missing scene (a file path or a gallery name)");
  if (std::filesystem::exists(arg)) return load_scene(arg);
  return gallery(arg).scene;
}

AdornedChain chain_of(const Scene& s) {
  if (!s.has_chain()) throw InputError("scene '" + s.name + "' has no chain");
  return s.chain();
}

void write_or_print(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << text)) throw GeometryError("cannot write " + path);
  std::cout << "wrote " << path << "\n";
}

void print_overlaps(const OverlapReport& r) {
  for (const OverlapPair& p : r.overlaps)
    std::printf("overlap: edges %d %d separation %.17g\n", p.e1, p.e2, p.separation);
}

int check(const Flags& f) {
  Scene s = load(f.scene);
  bool ok = true;
  if (s.has_chain()) {
    AdornedChain ch = s.chain();
    OverlapReport r = validate(ch, s.config(), f.tolerance());
    print_overlaps(r);
    ok = r.clean;
    for (size_t e = 0; e < ch.n_edges(); ++e) {
      SlenderVerdict v = is_slender(ch.adornment_at(static_cast<int>(e), s.config()), 16, f.tolerance());
      if (!v.is_slender) {
        std::printf("not slender: edge %zu\n", e);
        ok = false;
      }
    }
  }
  if (s.is_self_touching()) {
    try {
      s.linkage().check(f.tolerance());
    } catch (const GeometryError& e) {
      std::printf("linkage: %s\n", e.what());
      ok = false;
    }
  }
  std::printf("%s: %s\n", s.name.c_str(), ok ? "clean" : "overlap found");
  return ok ? 0 : 1;
}

// Shared tail of unfold and reconfigure: guard, report, write outputs.
int finish_motion(const Flags& f, const Scene& s, const AdornedChain& ch, const Trajectory& t, bool reached) {
  GuardReport g = guard_trajectory(ch, t, f.tolerance());
  std::printf("frames: %zu\n", t.size());
  std::printf("termination: %s\n", to_string(t.termination).c_str());
  if (!t.message.empty()) std::printf("message: %s\n", t.message.c_str());
  std::printf("guard: %s\n", g.clean ? "clean" : "violations");
  if (!g.clean) {
    int k = g.first_bad_frame();
    std::printf("first bad frame: %d (t = %.17g)\n", k, t.times[k]);
    for (const auto& [frame, p] : g.overlaps)
      if (frame == k) std::printf("overlap: edges %d %d separation %.17g\n", p.e1, p.e2, p.separation);
  }
  if (!f.out.empty()) {
    if (f.frames)
      render_trajectory(s, t, f.out);
    else {
      std::filesystem::create_directories(f.out);
      write_trajectory_csv(t, (std::filesystem::path(f.out) / "trajectory.csv").string());
    }
    std::printf("wrote %s\n", f.out.c_str());
  }
  return g.clean && reached ? 0 : 1;
}

Trajectory closed_sweep(const Flags& f, const Scene& s, const AdornedChain& ch) {
  if (s.target.empty()) throw InputError("closed chain needs a target configuration");
  return sweep(ch, s.config(), s.chain_config(s.target), f.sweep_steps);
}

int unfold(const Flags& f) {
  Scene s = load(f.scene);
  AdornedChain ch = chain_of(s);
  if (ch.closed && !s.target.empty()) return finish_motion(f, s, ch, closed_sweep(f, s, ch), true);
  Trajectory t = integrate(ch, s.config(), f.unfold());
  bool reached = t.termination == Termination::straight || t.termination == Termination::convex;
  if (reached) {
    double worst = 0;
    for (double a : turn_angles(ch, t.frames.back())) worst = std::max(worst, std::fabs(a));
    std::printf("max turn: %.17g\n", worst);
  }
  return finish_motion(f, s, ch, t, reached);
}

int reconfigure_cmd(const Flags& f) {
  Scene s = load(f.scene);
  AdornedChain ch = chain_of(s);
  if (s.target.empty()) throw InputError("scene '" + s.name + "' has no target configuration");
  if (ch.closed) return finish_motion(f, s, ch, closed_sweep(f, s, ch), true);
  for (const auto& [label, c] : {std::pair{"start", s.config()}, std::pair{"target", s.chain_config(s.target)}}) {
    OverlapReport r = validate(ch, c, f.tolerance());
    if (!r.clean) {
      std::printf("%s is not clean\n", label);
      print_overlaps(r);
      return 1;
    }
  }
  return finish_motion(f, s, ch, reconfigure(ch, s.config(), s.chain_config(s.target), f.unfold()), true);
}

int certify(const Flags& f) {
  Scene s = load(f.scene);
  if (!s.is_self_touching()) throw InputError("scene '" + s.name + "' has no self-touching connections");
  SimplifyResult simple = simplify(s.linkage(), s.rules);
  RigidityCertificate c = certify_rigid(simple.linkage);
  c.rule_chain = simple.log;
  std::string why;
  bool verified = c.conclusion == Conclusion::certified_rigid && verify_certificate(simple.linkage, c, &why);
  std::fprintf(stderr, "conclusion: %s\n", to_string(c.conclusion).c_str());
  if (c.conclusion == Conclusion::certified_rigid && !verified) std::fprintf(stderr, "verification failed: %s\n", why.c_str());
  write_or_print(f.out, c.to_text(simple.linkage));
  return verified ? 0 : 1;
}

int probe(const Flags& f, bool steps_given) {
  Scene s = load(f.scene);
  ProbeOptions o;
  o.trials = f.trials;
  o.seed = f.seed;
  o.pieces = s.pieces;
  if (steps_given) o.steps = f.max_steps;
  ProbeReport r = probe_locked(s.linkage(), f.delta, o);
  std::printf("trials: %d\nmax displacement: %.17g\nworst trial: %d\n", r.trials, r.max_displacement, r.worst_trial);
  std::printf("%s\n", r.hit_cap ? "moved: reached the displacement cap" : "no escape found (evidence only)");
  return r.hit_cap ? 1 : 0;
}

int area(const Flags& f) {
  Scene s = load(f.scene);
  AdornedChain ch = chain_of(s);
  McOptions mc;
  mc.seed = f.seed;
  AreaEstimate a = union_area(ch, s.config(), mc);
  std::printf("area: %.17g +- %.17g\n", a.value, a.half_width);
  if (!s.target.empty()) {
    AreaEstimate b = union_area(ch, s.chain_config(s.target), mc);
    std::printf("target area: %.17g +- %.17g\n", b.value, b.half_width);
  }
  return 0;
}

int gallery_cmd(const Flags& f) {
  if (f.scene.empty()) {
    for (const std::string& n : gallery_names()) std::printf("%s %s\n", n.c_str(), to_string(gallery(n).expected).c_str());
    return 0;
  }
  GalleryEntry g = gallery(f.scene);
  write_or_print(f.out, to_text(g.scene));
  return 0;
}

int render_cmd(const Flags& f) {
  Scene s = load(f.scene);
  if (f.out.empty()) throw InputError("render needs --out");
  render(s, f.out);
  std::printf("wrote %s\n", f.out.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adorned chains: overlap checks, expansive unfolding, rigidity certificates, areas, rendering."};
  app.require_subcommand(1);
  Flags f;
  app.add_option("--tol", f.tol, "geometric tolerance")->check(CLI::PositiveNumber);
  app.add_option("--overlap-tol", f.overlap_tol, "overlap tolerance")->check(CLI::PositiveNumber);
  app.add_option("--dt", f.dt, "initial time step")->check(CLI::PositiveNumber);
  app.add_option("--dt-min", f.dt_min, "smallest time step before stalling")->check(CLI::PositiveNumber);
  CLI::Option* steps = app.add_option("--max-steps", f.max_steps, "integration steps (probe: steps per trial)")
                           ->check(CLI::PositiveNumber);
  app.add_option("--straightness-tol", f.straightness_tol, "max turn angle counted as straight")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", f.seed, "random seed");
  app.add_option("--trials", f.trials, "probe trials")->check(CLI::PositiveNumber);
  app.add_option("--delta", f.delta, "probe: perturbation size")->check(CLI::PositiveNumber);
  app.add_option("--out", f.out, "output file or directory");
  app.add_flag("--frames", f.frames, "unfold/reconfigure: also write SVG frames into --out");
  app.add_option("--sweep-steps", f.sweep_steps, "closed chains: frames in the straight-line sweep")
      ->check(CLI::PositiveNumber);

  struct Cmd {
    const char* name;
    const char* help;
  };
  const Cmd cmds[] = {
      {"check", "validate a scene: overlaps, slenderness, linkage consistency"},
      {"unfold", "straighten (open) or convexify (closed) with expansive motion; closed scenes with a target sweep"},
      {"reconfigure", "move to the scene's target through the straight configuration"},
      {"certify", "simplify by the scene's rules and search for a rigidity certificate"},
      {"probe", "search for an escape motion of a self-touching linkage"},
      {"area", "Monte Carlo union area of the adornments"},
      {"gallery", "list gallery scenes, or print one as a scene file"},
      {"render", "write an SVG frame"},
  };
  std::map<std::string, CLI::App*> subs;
  for (const Cmd& c : cmds) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("scene", f.scene, std::string("scene file or gallery name") + (c.name == std::string("gallery") ? " (optional)" : ""));
    sub->fallthrough();
    subs[c.name] = sub;
  }
  app.footer("Exit codes: 0 clean or certified, 1 finding (overlap, not certified, escape found), 2 usage or input error.\n\n" +
             scene_schema());

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (subs["check"]->parsed()) return check(f);
    if (subs["unfold"]->parsed()) return unfold(f);
    if (subs["reconfigure"]->parsed()) return reconfigure_cmd(f);
    if (subs["certify"]->parsed()) return certify(f);
    if (subs["probe"]->parsed()) return probe(f, steps->count() > 0);
    if (subs["area"]->parsed()) return area(f);
    if (subs["gallery"]->parsed()) return gallery_cmd(f);
    if (subs["render"]->parsed()) return render_cmd(f);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << scene_schema();
    return 2;
  } catch (const GeometryError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
