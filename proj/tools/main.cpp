// Command-line front end: runs the verification batteries against a
// configuration, provides ad-hoc evaluation of the kernel, tile and atom
// machinery, and writes machine-readable reports.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "qszego/batteries.hpp"

using namespace qszego;

namespace {

struct GlobalOpts {
  RunConfig cfg;
  std::string out_dir;
  std::string config_file;
  bool json_stdout = false;
  bool csv = false;
};

// flat key=value file; command-line flags win over file entries
void load_config_file(const std::string& path, RunConfig& cfg,
                      const CLI::App& app) {
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("--config", "cannot open " + path);
  std::string line;
  auto unset = [&](const std::string& flag) {
    const CLI::Option* o = app.get_option_no_throw(flag);
    return o == nullptr || o->count() == 0;
  };
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t");
      const auto e = s.find_last_not_of(" \t");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key == "n" && unset("--n")) cfg.n = std::stoi(val);
    else if (key == "c" && unset("--c")) cfg.c = std::stod(val);
    else if (key == "seed" && unset("--seed")) cfg.seed = std::stoull(val);
    else if (key == "samples" && unset("--samples")) cfg.samples = std::stod(val);
    else if (key == "tol-scale" && unset("--tol-scale")) cfg.tol_scale = std::stod(val);
    else if (key == "threads" && unset("--threads")) cfg.threads = std::stoi(val);
  }
}

int emit(const GlobalOpts&g, const std::vector<BatteryResult>& results) {
  const nlohmann::json j = report_json(g.cfg, results);
  if (!g.out_dir.empty()) {
    std::filesystem::create_directories(g.out_dir);
    std::ofstream out(g.out_dir + "/report.json");
    if (!out) {
      std::cerr << "cannot write report to " << g.out_dir << "\n";
      return 1;
    }
    out << j.dump(2) << "\n";
    if (g.csv)
      for (const auto& r : results)
        if (!r.series.empty()) {
          std::ofstream cs(g.out_dir + "/" + r.name + ".csv");
          cs << r.series_header << "\n";
          for (const auto& row : r.series)
            cs << row[0] << "," << row[1] << "," << row[2] << "\n";
        }
  }
  if (g.json_stdout || g.out_dir.empty()) std::cout << j.dump(2) << "\n";
  for (const auto& r : results)
    std::cerr << (r.pass ? "[pass] " : "[FAIL] ") << r.name << "  ("
              << r.runtime_s << " s)\n";
  return j["status"] == "pass" ? 0 : 1;
}

std::vector<double> parse_reals(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

GroupPoint point_from_reals(GroupDim dim, const std::vector<double>& v) {
  if (static_cast<int>(v.size()) != dim.topdim())
    throw CLI::ValidationError("point", "need t1,t2,t3 followed by the y block");
  GroupPoint g(dim);
  for (int i = 0; i < 3; ++i) g.t[i] = v[i];
  for (int i = 0; i < dim.horiz(); ++i) g.y[i] = v[3 + i];
  return g;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical verification batteries for the boundary projection "
               "kernel, tile hierarchy and atom machinery"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  GlobalOpts g;
  app.add_option("--n", g.cfg.n, "quaternionic dimension (default 2)");
  app.add_option("--c", g.cfg.c, "kernel normalization constant");
  app.add_option("--seed", g.cfg.seed, "base seed for the counter RNG streams");
  app.add_option("--samples", g.cfg.samples,
                 "headline sample count (default 100000); batteries scale from it");
  app.add_option("--tol-scale", g.cfg.tol_scale, "scale factor on tolerances");
  app.add_option("--threads", g.cfg.threads, "worker pool size (0 = hardware)");
  app.add_option("--out", g.out_dir, "output directory for report.json");
  app.add_option("--config", g.config_file, "flat key=value configuration file");
  app.add_flag("--json", g.json_stdout, "print the JSON report to stdout");
  app.add_flag("--csv", g.csv, "emit CSV series next to the report");
  app.add_flag("--timings", g.cfg.timings, "include runtimes in the report");

  // ad-hoc evaluation
  auto* eval = app.add_subcommand("kernel-eval", "evaluate s(sigma) or K((t,g),g')");
  std::string sigma_arg, point_arg, gprime_arg;
  double eval_t = 1.0;
  eval->add_option("--sigma", sigma_arg, "quaternion w,x,y,z for the slice kernel");
  eval->add_option("--t", eval_t, "height for the pair kernel");
  eval->add_option("--point", point_arg, "first boundary point t1,t2,t3,y...");
  eval->add_option("--gprime", gprime_arg, "second boundary point t1,t2,t3,y...");

  auto* group_audit = app.add_subcommand("group-audit", "group law battery");
  auto* invariance = app.add_subcommand("invariance", "kernel invariance battery");
  auto* regularity = app.add_subcommand(
      "regularity", "first-order system, parabolic operator and |K|^p battery");
  auto* decay = app.add_subcommand("decay", "far-field decay slopes");
  std::string decay_index;
  decay->add_option("--index", decay_index,
                    "comma multi-index over the 4n-1 fields (d(I) <= 2)");
  auto* minsphere = app.add_subcommand("min-sphere", "sphere minimum of |K|");
  int min_samples = 0;
  minsphere->add_option("--samples-abs", min_samples, "sphere sample count");

  auto* tile = app.add_subcommand("tile", "tile hierarchy commands");
  tile->require_subcommand(1);
  auto* tile_locate = tile->add_subcommand("locate", "address containing a point");
  std::string tile_point;
  int tile_scale = 0;
  tile_locate->add_option("--point", tile_point, "t1,t2,t3,y...")->required();
  tile_locate->add_option("--j", tile_scale, "scale");
  auto* tile_children = tile->add_subcommand("children", "subtile addresses");
  std::string gamma_arg = "";
  int child_scale = 1;
  tile_children->add_option("--j", child_scale, "scale");
  tile_children->add_option("--gamma", gamma_arg,
                            "lattice point a...,b1,b2,b3 (default 0)");
  auto* tile_audit = tile->add_subcommand("audit", "tile hierarchy battery");
  auto* tile_sign = tile->add_subcommand("sign-search", "sign tile battery");
  int sign_scale = 0, sign_tiles = 10;
  std::string annulus_arg;
  tile_sign->add_option("--j", sign_scale, "base scale");
  tile_sign->add_option("--tiles", sign_tiles, "tiles per scale in the battery");
  tile_sign->add_option("--annulus", annulus_arg, "lo,hi in widths");

  auto* atom = app.add_subcommand("atom", "atom commands");
  atom->require_subcommand(1);
  double atom_r = 1.0, atom_p = 1.0;
  int atom_alpha = 0;
  std::uint64_t atom_seed = 7;
  std::string atom_center, atom_file;
  auto add_atom_opts = [&](CLI::App* sub) {
    sub->add_option("--r", atom_r, "support radius");
    sub->add_option("--p", atom_p, "exponent in (2/3, 1]");
    sub->add_option("--alpha", atom_alpha, "vanishing moment degree");
    sub->add_option("--atom-seed", atom_seed, "profile seed");
    sub->add_option("--center", atom_center, "t1,t2,t3,y...");
    sub->add_option("--atom-file", atom_file, "serialized atom (overrides flags)");
  };
  auto* atom_make = atom->add_subcommand("make", "construct and print an atom");
  add_atom_opts(atom_make);
  auto* atom_check = atom->add_subcommand("check", "audit the three conditions");
  add_atom_opts(atom_check);
  auto* atom_project = atom->add_subcommand("project", "evaluate the projection");
  add_atom_opts(atom_project);
  double proj_t = 1.0;
  std::string proj_at;
  atom_project->add_option("--t", proj_t, "height");
  atom_project->add_option("--at", proj_at, "evaluation point t1,t2,t3,y...");
  auto* atom_scan = atom->add_subcommand("hp-scan", "height integral scan");
  add_atom_opts(atom_scan);
  std::string eps_arg = "0.01,0.1,1,10,100";
  atom_scan->add_option("--eps", eps_arg, "comma list of heights");

  auto* commutator = app.add_subcommand("commutator", "discretized commutator");
  std::string symbol_name = "const";
  int comm_nodes = 500;
  commutator->add_option("--symbol", symbol_name, "const | norm");
  commutator->add_option("--nodes", comm_nodes, "patch node count (<= 2000)");

  auto* all = app.add_subcommand("all", "run every battery");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (!g.config_file.empty()) load_config_file(g.config_file, g.cfg, app);
    const GroupDim dim(g.cfg.n);
    const KernelContext ctx(dim, g.cfg.c);

    if (eval->parsed()) {
      nlohmann::json j;
      if (!sigma_arg.empty()) {
        const auto v = parse_reals(sigma_arg);
        if (v.size() != 4) throw CLI::ValidationError("--sigma", "need 4 reals");
        const Quaternion s = s_quat(ctx, {v[0], v[1], v[2], v[3]});
        j["s"] = {s.w, s.x, s.y, s.z};
      } else {
        const GroupPoint gp1 = point_from_reals(dim, parse_reals(point_arg));
        const GroupPoint gp2 =
            gprime_arg.empty() ? GroupPoint(dim)
                               : point_from_reals(dim, parse_reals(gprime_arg));
        const Quaternion k = kernel_upper(ctx, eval_t, gp1, gp2);
        j["K"] = {k.w, k.x, k.y, k.z};
      }
      std::cout << j.dump(2) << "\n";
      return 0;
    }
    if (tile->parsed() && tile_locate->parsed()) {
      const BasicTileData btd(dim);
      const GroupPoint p = point_from_reals(dim, parse_reals(tile_point));
      std::cout << to_json(locate(btd, p, tile_scale)).dump(2) << "\n";
      return 0;
    }
    if (tile->parsed() && tile_children->parsed()) {
      TileAddress addr(dim, child_scale);
      if (!gamma_arg.empty()) {
        const auto v = parse_reals(gamma_arg);
        if (static_cast<int>(v.size()) != dim.topdim())
          throw CLI::ValidationError("--gamma", "need 4n-1 integers");
        for (int i = 0; i < dim.horiz(); ++i)
          addr.a[i] = static_cast<std::int64_t>(v[i]);
        for (int i = 0; i < 3; ++i)
          addr.b[i] = static_cast<std::int64_t>(v[dim.horiz() + i]);
      }
      nlohmann::json j;
      for (const auto& c : children(dim, addr)) j["children"].push_back(to_json(c));
      j["count"] = j["children"].size();
      std::cout << j.dump(2) << "\n";
      return 0;
    }
    if (atom->parsed()) {
      Atom a = !atom_file.empty()
                   ? atom_from_json(nlohmann::json::parse(std::ifstream(atom_file)))
                   : make_atom(dim,
                               atom_center.empty()
                                   ? GroupPoint(dim)
                                   : point_from_reals(dim, parse_reals(atom_center)),
                               atom_r, atom_p, atom_alpha, atom_seed);
      if (atom_make->parsed()) {
        std::cout << to_json(a).dump(2) << "\n";
        return 0;
      }
      if (atom_check->parsed()) {
        const AtomCheck chk = check_atom(a);
        nlohmann::json j = to_json(a);
        j["check"]["support_ok"] = chk.support_ok;
        j["check"]["sup_ok"] = chk.sup_ok;
        j["check"]["moments_ok"] = chk.moments_ok;
        j["check"]["sup_found"] = chk.sup_found;
        j["check"]["sup_bound"] = chk.sup_bound;
        j["check"]["worst_moment_rel"] = chk.worst_moment_rel;
        std::cout << j.dump(2) << "\n";
        return chk.pass() ? 0 : 1;
      }
      if (atom_project->parsed()) {
        const GroupPoint at = proj_at.empty()
                                  ? GroupPoint(dim)
                                  : point_from_reals(dim, parse_reals(proj_at));
        const Projection pr = project_atom(ctx, a, proj_t, at, 0, g.cfg.threads);
        nlohmann::json j;
        j["value"] = {pr.value.w, pr.value.x, pr.value.y, pr.value.z};
        j["err_estimate"] = pr.err_estimate;
        std::cout << j.dump(2) << "\n";
        return 0;
      }
      if (atom_scan->parsed()) {
        HpScanConfig scfg;
        scfg.threads = g.cfg.threads;
        const auto pts = hp_scan(ctx, a, parse_reals(eps_arg), scfg);
        nlohmann::json j;
        for (const auto& pt : pts) {
          nlohmann::json row;
          row["eps"] = pt.eps;
          row["value"] = pt.value;
          row["tail_share"] = pt.tail_share;
          row["tail_dominates"] = pt.tail_dominates;
          j["scan"].push_back(row);
        }
        std::cout << j.dump(2) << "\n";
        if (g.csv && !g.out_dir.empty()) {
          std::filesystem::create_directories(g.out_dir);
          std::ofstream cs(g.out_dir + "/hp-scan.csv");
          cs << "eps,value,tail_share\n";
          for (const auto& pt : pts)
            cs << pt.eps << "," << pt.value << "," << pt.tail_share << "\n";
        }
        return 0;
      }
    }

    std::vector<BatteryResult> results;
    if (group_audit->parsed()) results.push_back(battery_group_audit(g.cfg));
    if (invariance->parsed()) results.push_back(battery_invariance(g.cfg));
    if (regularity->parsed()) {
      results.push_back(battery_regularity(g.cfg));
      results.push_back(battery_subharmonicity(g.cfg));
    }
    if (decay->parsed()) {
      if (!decay_index.empty()) {
        const auto v = parse_reals(decay_index);
        MultiIndex I(dim.topdim());
        if (static_cast<int>(v.size()) != dim.topdim())
          throw CLI::ValidationError("--index", "need 4n-1 entries");
        for (int i = 0; i < dim.topdim(); ++i) I.a[i] = static_cast<int>(v[i]);
        results.push_back(battery_decay(g.cfg, &I));
      } else {
        results.push_back(battery_decay(g.cfg));
      }
    }
    if (minsphere->parsed()) results.push_back(battery_min_sphere(g.cfg, min_samples));
    if (tile->parsed() && tile_audit->parsed())
      results.push_back(battery_tile_audit(g.cfg));
    if (tile->parsed() && tile_sign->parsed()) {
      int lo = 3, hi = 64;
      if (!annulus_arg.empty()) {
        const auto v = parse_reals(annulus_arg);
        if (v.size() != 2) throw CLI::ValidationError("--annulus", "need lo,hi");
        lo = static_cast<int>(v[0]);
        hi = static_cast<int>(v[1]);
      }
      results.push_back(battery_sign_search(g.cfg, sign_tiles, sign_scale, lo, hi));
    }
    if (commutator->parsed()) {
      if (symbol_name != "const" && symbol_name != "norm")
        throw CLI::ValidationError("--symbol", "known symbols: const, norm");
      results.push_back(battery_commutator(g.cfg, comm_nodes));
    }
    if (all->parsed()) results = run_all_batteries(g.cfg);
    if (results.empty()) {
      std::cerr << "nothing to run\n";
      return 2;
    }
    return emit(g, results);
  } catch (const CLI::Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const NotInDomain& e) {
    std::cerr << "bad argument: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
