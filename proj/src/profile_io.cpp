#include "helm/profile_io.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

namespace helm {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const char* where,
                         std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool ok = false;
    for (const char* key : allowed)
      if (item.key() == key) ok = true;
    if (!ok)
      fail(ErrorCode::parse_error,
           std::string("unknown key \"") + item.key() + "\" in " + where);
  }
}

double require_number(const json& obj, const char* where, const char* key) {
  if (!obj.contains(key))
    fail(ErrorCode::parse_error,
         std::string(where) + " is missing required key \"" + key + "\"");
  const json& v = obj.at(key);
  if (!v.is_number())
    fail(ErrorCode::parse_error,
         std::string(where) + ": \"" + key + "\" must be a number");
  return v.get<double>();
}

AlphaSpec parse_alpha(const json& obj) {
  if (!obj.is_object())
    fail(ErrorCode::parse_error, "\"alpha\" must be an object");
  if (!obj.contains("kind") || !obj.at("kind").is_string())
    fail(ErrorCode::parse_error, "\"alpha\" needs a string \"kind\"");
  const std::string kind = obj.at("kind").get<std::string>();
  if (kind == "zero") {
    reject_unknown_keys(obj, "alpha(zero)", {"kind"});
    return AlphaSpec::zero();
  }
  if (kind == "constant") {
    reject_unknown_keys(obj, "alpha(constant)", {"kind", "value"});
    return AlphaSpec::constant(require_number(obj, "alpha(constant)", "value"));
  }
  if (kind == "linear") {
    reject_unknown_keys(obj, "alpha(linear)", {"kind", "value0", "slope"});
    return AlphaSpec::linear(require_number(obj, "alpha(linear)", "value0"),
                             require_number(obj, "alpha(linear)", "slope"));
  }
  if (kind == "gaussian-bump") {
    reject_unknown_keys(obj, "alpha(gaussian-bump)",
                        {"kind", "amplitude", "center", "width"});
    return AlphaSpec::gaussian_bump(
        require_number(obj, "alpha(gaussian-bump)", "amplitude"),
        require_number(obj, "alpha(gaussian-bump)", "center"),
        require_number(obj, "alpha(gaussian-bump)", "width"));
  }
  if (kind == "grid") {
    reject_unknown_keys(obj, "alpha(grid)", {"kind", "samples"});
    if (!obj.contains("samples") || !obj.at("samples").is_array())
      fail(ErrorCode::parse_error, "alpha(grid) needs a \"samples\" array");
    std::vector<double> samples;
    for (const json& v : obj.at("samples")) {
      if (!v.is_number())
        fail(ErrorCode::parse_error, "alpha(grid) samples must be numbers");
      samples.push_back(v.get<double>());
    }
    return AlphaSpec::grid(std::move(samples));
  }
  fail(ErrorCode::parse_error, "unknown alpha kind \"" + kind + "\"");
}

json alpha_to_json(const AlphaSpec& a) {
  switch (a.kind) {
    case AlphaKind::zero:
      return {{"kind", "zero"}};
    case AlphaKind::constant:
      return {{"kind", "constant"}, {"value", a.value}};
    case AlphaKind::linear:
      return {{"kind", "linear"}, {"value0", a.value0}, {"slope", a.slope}};
    case AlphaKind::gaussian_bump:
      return {{"kind", "gaussian-bump"},
              {"amplitude", a.amplitude},
              {"center", a.center},
              {"width", a.width}};
    case AlphaKind::grid:
      return {{"kind", "grid"}, {"samples", a.samples}};
  }
  fail(ErrorCode::invalid_argument, "unknown alpha kind");
}

}  // namespace

ImpedanceProfile profile_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::parse_error, e.what());
  }
  if (!doc.is_object())
    fail(ErrorCode::parse_error, "profile document must be a JSON object");
  reject_unknown_keys(doc, "profile",
                      {"x0", "zeta_left", "segments", "jumps"});
  ImpedanceProfile p;
  p.x0 = require_number(doc, "profile", "x0");
  p.zeta_left = require_number(doc, "profile", "zeta_left");
  if (!doc.contains("segments") || !doc.at("segments").is_array())
    fail(ErrorCode::parse_error, "profile needs a \"segments\" array");
  for (const json& s : doc.at("segments")) {
    if (!s.is_object())
      fail(ErrorCode::parse_error, "each segment must be an object");
    reject_unknown_keys(s, "segment", {"lo", "hi", "alpha"});
    Segment seg;
    seg.lo = require_number(s, "segment", "lo");
    seg.hi = require_number(s, "segment", "hi");
    if (!s.contains("alpha"))
      fail(ErrorCode::parse_error, "segment is missing \"alpha\"");
    seg.alpha = parse_alpha(s.at("alpha"));
    p.segments.push_back(std::move(seg));
  }
  if (doc.contains("jumps")) {
    if (!doc.at("jumps").is_array())
      fail(ErrorCode::parse_error, "\"jumps\" must be an array");
    for (const json& j : doc.at("jumps")) {
      if (!j.is_object())
        fail(ErrorCode::parse_error, "each jump must be an object");
      reject_unknown_keys(j, "jump", {"y", "gamma"});
      p.jumps.push_back({require_number(j, "jump", "y"),
                         require_number(j, "jump", "gamma")});
    }
  }
  p.validate();
  return p;
}

ImpedanceProfile load_profile(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    fail(ErrorCode::parse_error, "cannot open profile file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return profile_from_json(buffer.str());
}

std::string profile_to_json(const ImpedanceProfile& profile) {
  json doc;
  doc["x0"] = profile.x0;
  doc["zeta_left"] = profile.zeta_left;
  doc["segments"] = json::array();
  for (const Segment& seg : profile.segments)
    doc["segments"].push_back(
        {{"lo", seg.lo}, {"hi", seg.hi}, {"alpha", alpha_to_json(seg.alpha)}});
  doc["jumps"] = json::array();
  for (const JumpPoint& j : profile.jumps)
    doc["jumps"].push_back({{"y", j.y}, {"gamma", j.gamma}});
  return doc.dump(2) + "\n";
}

void save_profile(const ImpedanceProfile& profile, const std::string& path) {
  std::ofstream out(path);
  if (!out)
    fail(ErrorCode::parse_error, "cannot open file for writing: " + path);
  out << profile_to_json(profile);
}

}  // namespace helm
