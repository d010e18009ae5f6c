#include "blurtv/serialize.hpp"

#include "blurtv/error.hpp"

namespace blurtv {

nlohmann::json to_json(const BoundResult& r) {
  nlohmann::json out;
  out["method"] = to_string(r.method);
  out["alpha"] = r.alpha;
  out["h"] = r.h;
  out["n"] = r.n;
  out["m"] = r.m;
  out["B"] = r.draws ? nlohmann::json(*r.draws) : nlohmann::json(nullptr);
  out["estimate"] = r.estimate;
  out["lcb"] = r.lcb ? nlohmann::json(*r.lcb) : nlohmann::json(nullptr);
  out["ucb_raw"] = r.ucb_raw;
  out["ucb"] = r.ucb;
  out["margins"] = r.margins;
  out["diagnostics"] = r.diagnostics;
  out["notes"] = r.notes;
  out["seed"] = r.seed;
  return out;
}

Kernel kernel_from_json(const nlohmann::json& spec) {
  try {
    const std::string family = spec.at("family").get<std::string>();
    if (family == "gaussian") return Kernel::gaussian(spec.value("dim", std::size_t{1}));
    if (family == "gaussian_mixture_1d")
      return Kernel::gaussian_mixture_1d(spec.at("means").get<std::vector<double>>(),
                                         spec.at("weights").get<std::vector<double>>(),
                                         spec.at("sds").get<std::vector<double>>());
    throw ArgumentError("unknown kernel family '" + family + "'");
  } catch (const nlohmann::json::exception& e) {
    throw ArgumentError(std::string("invalid kernel description: ") + e.what());
  }
}

nlohmann::json kernel_to_json(const Kernel& kernel) {
  if (kernel.is_gaussian()) return {{"family", "gaussian"}, {"dim", kernel.dim()}};
  return {{"family", "gaussian_mixture_1d"},
          {"means", kernel.means()},
          {"weights", kernel.weights()},
          {"sds", kernel.sds()}};
}

std::string dump(const nlohmann::json& value) { return value.dump(); }

}  // namespace blurtv
