#ifndef QSZEGO_JSON_IO_HPP
#define QSZEGO_JSON_IO_HPP

#include <json.hpp>

#include "qszego/atoms.hpp"
#include "qszego/tiling.hpp"

namespace qszego {

inline nlohmann::json to_json(const TileAddress& addr) {
  nlohmann::json j;
  j["j"] = addr.j;
  j["a"] = std::vector<std::int64_t>(addr.a.begin(), addr.a.begin() + addr.horiz);
  j["b"] = std::vector<std::int64_t>(addr.b.begin(), addr.b.end());
  return j;
}

inline TileAddress tile_address_from_json(GroupDim dim, const nlohmann::json& j) {
  TileAddress addr(dim, j.at("j").get<int>());
  const auto a = j.at("a").get<std::vector<std::int64_t>>();
  const auto b = j.at("b").get<std::vector<std::int64_t>>();
  if (static_cast<int>(a.size()) != dim.horiz() || b.size() != 3)
    throw DimMismatch("tile_address_from_json: wrong arity");
  for (int i = 0; i < dim.horiz(); ++i) addr.a[i] = a[i];
  for (int i = 0; i < 3; ++i) addr.b[i] = b[i];
  return addr;
}

inline nlohmann::json to_json(const Atom& a) {
  nlohmann::json j;
  j["template"] = "bump_poly_box";
  j["n"] = a.dim().n;
  j["center"]["t"] = std::vector<double>(a.center.t.begin(), a.center.t.end());
  j["center"]["y"] =
      std::vector<double>(a.center.y.begin(), a.center.y.begin() + a.center.horiz);
  j["radius"] = a.radius;
  j["p"] = a.p;
  j["alpha"] = a.alpha;
  j["seed"] = a.seed;
  j["nodes"] = a.quad.count;
  j["node_seed"] = a.quad.seed;
  return j;
}

/// Rebuilds the atom from its serialized parameters (the template is a pure
/// function of them).
inline Atom atom_from_json(const nlohmann::json& j) {
  if (j.at("template").get<std::string>() != "bump_poly_box")
    throw NotInDomain("atom_from_json: unknown template id");
  const GroupDim dim(j.at("n").get<int>());
  GroupPoint g0(dim);
  const auto t = j.at("center").at("t").get<std::vector<double>>();
  const auto y = j.at("center").at("y").get<std::vector<double>>();
  if (t.size() != 3 || static_cast<int>(y.size()) != dim.horiz())
    throw DimMismatch("atom_from_json: center arity");
  for (int i = 0; i < 3; ++i) g0.t[i] = t[i];
  for (int i = 0; i < dim.horiz(); ++i) g0.y[i] = y[i];
  QuadratureSpec quad{j.at("nodes").get<int>(), j.at("node_seed").get<std::uint64_t>()};
  return make_atom(dim, g0, j.at("radius").get<double>(), j.at("p").get<double>(),
                   j.at("alpha").get<int>(), j.at("seed").get<std::uint64_t>(), quad);
}

}  // namespace qszego

#endif
