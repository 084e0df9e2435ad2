#pragma once

// Generated fixtures: six-level facility db, compositional explorer space,
// middle-layer tree with keyword map and example library, two toy graphs
// mapped onto the core ontology, and the default synonym table.

#include <string>
#include <utility>
#include <vector>

#include "chanfind/bench.hpp"
#include "chanfind/channel_db.hpp"
#include "chanfind/document.hpp"
#include "chanfind/middle_layer.hpp"
#include "chanfind/ontology.hpp"

namespace chanfind {

// Alternates are single tokens; the oracle maps them back through its glossary.
inline SynonymTable default_synonyms() {
  return {{"horizontal", {"horiz"}},    {"vertical", {"vert"}},        {"position", {"posn"}},
          {"current", {"amps"}},        {"voltage", {"volts"}},        {"temperature", {"temp"}},
          {"pressure", {"press"}},      {"setpoint", {"demand"}},      {"readback", {"rdbk"}},
          {"camera", {"cam"}},          {"image", {"picture"}},        {"quadrupole", {"quad"}},
          {"corrector", {"steerer"}},   {"frequency", {"freq"}},       {"power", {"pwr"}},
          {"magnet", {"electromagnet"}}, {"monitor", {"mon"}},
          {"cavity", {"resonator"}},    {"gauge", {"gage"}},           {"amplitude", {"ampl"}}};
}

inline json synonyms_to_json(const SynonymTable& t) {
  json j = json::object();
  for (const auto& [k, v] : t) j[k] = v;
  return j;
}

inline SynonymTable load_synonyms(const json& doc) {
  SynonymTable t;
  for (const auto& [k, v] : doc.items()) t[k] = v.get<std::vector<std::string>>();
  return t;
}

namespace synth_detail {

inline json node(const std::string& level, const std::string& value, const std::string& desc, json children = json::array()) {
  json n = {{"level", level}, {"value", value}, {"description", desc}};
  if (!children.empty()) n["children"] = std::move(children);
  return n;
}

inline json range(const std::string& level, const std::string& prefix, long lo, long hi, int pad, const std::string& desc,
                  json children = json::array()) {
  json n = {{"level", level},
            {"description", desc},
            {"expand", {{"kind", "range"}, {"prefix", prefix}, {"lo", lo}, {"hi", hi}, {"pad", pad}, {"description", desc}}}};
  if (!children.empty()) n["children"] = std::move(children);
  return n;
}

inline json list(const std::string& level, const std::vector<std::pair<std::string, std::string>>& items, const std::string& desc,
                 json children = json::array()) {
  json arr = json::array();
  for (const auto& [v, d] : items) arr.push_back({{"value", v}, {"description", d}});
  json n = {{"level", level}, {"description", desc}, {"expand", {{"kind", "list"}, {"items", arr}}}};
  if (!children.empty()) n["children"] = std::move(children);
  return n;
}

// Suffix leaves under a signal.
inline json sfx(std::initializer_list<const char*> codes) {
  json out = json::array();
  for (const char* c : codes) {
    const std::string code = c;
    const char* d = code == "SP" ? "setpoint" : code == "RB" ? "readback" : "command";
    out.push_back(node("suffix", code, d));
  }
  return out;
}

inline json sig(const std::string& value, const std::string& desc, json suffixes = json::array()) {
  return node("signal", value, desc, std::move(suffixes));
}

inline json six_level_schema() {
  return {{"levels",
           json::array({"system", "subsystem", "device", {{"name", "subdevice"}, {"optional", true}}, "signal",
                        {{"name", "suffix"}, {"optional", true}}})},
          {"pattern", "{0}-{1}:{2}:{3}:{4}.{5}"}};
}

inline json six_level_suffixes() { return {{"SP", "setpoint"}, {"RB", "readback"}, {"CMD", "command"}}; }

}  // namespace synth_detail

// Same tree shape at every scale; only the device ranges grow.
// scale 1 gives 1,008 channels, scale 10 gives 10,080.
inline json six_level_config(int scale = 1) {
  using namespace synth_detail;
  const long u = 4L * scale;
  json gauge_signals = json::array({sig("PRES", "pressure", sfx({"RB"})), sig("EMIS", "emission current", sfx({"SP", "RB"})),
                                    sig("DEGAS", "degas cycle", sfx({"CMD", "RB"}))});
  json pump_signals = json::array({sig("VOLT", "high voltage", sfx({"SP", "RB"})), sig("CURR", "pump current", sfx({"RB"})),
                                   sig("ENA", "output enable", sfx({"CMD", "RB"}))});
  json vac = node("system", "VAC", "vacuum system",
                  json::array({node("subsystem", "IGC", "ion gauge controllers",
                                    json::array({range("device", "GC", 1, 3 * u, 2, "gauge controller {n}",
                                                       json::array({list("subdevice", {{"IGA", "upstream ion gauge"}, {"IGB", "downstream ion gauge"}},
                                                                         "ion gauge", gauge_signals),
                                                                    sig("FWVER", "firmware version"),
                                                                    sig("UNITS", "pressure units", sfx({"SP", "RB"}))}))})),
                               node("subsystem", "IPC", "ion pump controllers",
                                    json::array({range("device", "PC", 1, 3 * u, 2, "pump controller {n}",
                                                       json::array({list("subdevice", {{"IPL", "left ion pump"}, {"IPR", "right ion pump"}},
                                                                         "ion pump", pump_signals),
                                                                    sig("FWVER", "firmware version")}))}))}));
  auto supply_signals = [] {
    return json::array({sig("CURR", "output current", sfx({"SP", "RB"})), sig("VOLT", "output voltage", sfx({"RB"})),
                        sig("STATE", "power state", sfx({"CMD", "RB"})), sig("FWVER", "firmware version")});
  };
  json mag = node("system", "MAG", "magnet power supplies",
                  json::array({node("subsystem", "QPS", "quadrupole supplies",
                                    json::array({range("device", "QD", 1, 5 * u, 2, "quadrupole supply {n}", supply_signals())})),
                               node("subsystem", "CPS", "corrector supplies",
                                    json::array({range("device", "CR", 1, 8 * u, 2, "corrector supply {n}", supply_signals())}))}));
  json cavity = json::array({node("subdevice", "TUN", "tuner",
                                  json::array({sig("POS", "tuner position", sfx({"SP", "RB"})), sig("MOT", "motor enable", sfx({"CMD", "RB"}))})),
                             node("subdevice", "CPL", "power coupler",
                                  json::array({sig("TEMP", "coupler temperature", sfx({"RB"})), sig("ARC", "arc detector", sfx({"CMD", "RB"}))})),
                             sig("AMPL", "field amplitude", sfx({"SP", "RB"})), sig("PHASE", "field phase", sfx({"SP", "RB"}))});
  json klystron = json::array({sig("FWD", "forward power", sfx({"RB"})), sig("REFL", "reflected power", sfx({"RB"})),
                               sig("HV", "cathode voltage", sfx({"SP", "RB"})), sig("FIL", "heater power", sfx({"CMD", "RB"}))});
  json rfs = node("system", "RFS", "radio frequency",
                  json::array({node("subsystem", "CAV", "cavities", json::array({range("device", "CV", 1, 2 * u, 2, "cavity {n}", cavity)})),
                               node("subsystem", "KLY", "klystrons",
                                    json::array({range("device", "KL", 1, 2 * u, 2, "klystron {n}", klystron)}))}));
  json bpm = json::array({sig("XPOS", "horizontal position", sfx({"RB"})), sig("YPOS", "vertical position", sfx({"RB"})),
                          sig("SUM", "button sum", sfx({"RB"})), sig("GAIN", "attenuator gain", sfx({"SP", "RB"}))});
  json blm = json::array({sig("RATE", "loss rate", sfx({"RB"})), sig("THR", "alarm threshold", sfx({"SP", "RB"}))});
  json dia = node("system", "DIA", "beam diagnostics",
                  json::array({node("subsystem", "BPM", "beam position monitors",
                                    json::array({range("device", "BP", 1, 10 * u, 2, "position monitor {n}", bpm)})),
                               node("subsystem", "BLM", "loss monitors",
                                    json::array({range("device", "LM", 1, 6 * u, 2, "loss monitor {n}", blm)}))}));
  return {{"name", "six-level-x" + std::to_string(scale)},
          {"schema", six_level_schema()},
          {"suffixes", six_level_suffixes()},
          {"tree", json::array({vac, mag, rfs, dia})}};
}

// ---- compositional address space ------------------------------------------

namespace synth_detail {

struct PropertySpec {
  const char* value;
  const char* description;
};

struct DeviceSpec {
  const char* value;
  const char* description;
  const char* location_code;
  const char* location_kind;
  int locations;
  std::vector<PropertySpec> properties;
};

inline const std::vector<DeviceSpec>& device_catalogue() {
  static const std::vector<DeviceSpec> kDevices = {
      {"CAMERA", "screen camera", "OTRC", "screen station", 5,
       {{"IMAGE", "The camera image (8 bit)"}, {"GAIN", "sensor gain"}, {"EXPOSURE", "exposure time"},
        {"FRAMERATE", "acquisition frame rate"}, {"ROI", "region of interest"}}},
      {"BPM", "beam position monitor", "BPMA", "button pickup", 5,
       {{"X.TD", "horizontal position train data"}, {"Y.TD", "vertical position train data"},
        {"CHARGE.TD", "bunch charge train data"}, {"STATE", "pickup state"}}},
      {"TOROID", "toroid charge monitor", "TORA", "toroid station", 3, {{"CHARGE", "bunch charge"}, {"STATE", "toroid state"}}},
      {"BLM", "beam loss monitor", "BLMI", "loss detector", 4, {{"LOSS", "integrated loss"}, {"THRESHOLD", "alarm threshold"}}},
      {"QUAD", "quadrupole magnet", "QS", "lattice slot", 5,
       {{"CURRENT.SP", "current setpoint"}, {"CURRENT.RBV", "current readback"}, {"STRENGTH", "focusing strength k1"}}},
      {"CORR", "corrector magnet", "CK", "steering slot", 5,
       {{"KICK.SP", "kick angle setpoint"}, {"KICK.RBV", "kick angle readback"}, {"CURRENT.RBV", "coil current readback"}}},
      {"LLRF", "low level rf controller", "RFS", "rf station", 3,
       {{"AMPL.SP", "amplitude setpoint"}, {"AMPL.RBV", "amplitude readback"}, {"PHASE.SP", "phase setpoint"},
        {"PHASE.RBV", "phase readback"}}},
      {"KLYSTRON", "klystron amplifier", "KLY", "modulator bay", 3,
       {{"FWD", "forward power"}, {"REFL", "reflected power"}, {"HV", "cathode high voltage"}}},
      {"GAUGE", "vacuum gauge", "VGC", "gauge port", 4, {{"PRESSURE", "pressure reading"}, {"STATE", "gauge state"}}},
      {"PUMP", "ion pump", "VIP", "pump port", 4,
       {{"CURRENT", "pump current"}, {"PRESSURE", "pump pressure"}, {"VOLTAGE", "pump voltage"}}},
      {"VALVE", "gate valve", "VGV", "sector valve slot", 3, {{"POSITION", "valve position"}, {"COMMAND", "open close command"}}},
  };
  return kDevices;
}

inline const std::vector<std::pair<std::string, std::string>>& sections() {
  static const std::vector<std::pair<std::string, std::string>> kSections = {
      {"I1", "injector"},          {"L1", "first linac"}, {"B1", "first bunch compressor"},
      {"L2", "second linac"},      {"B2", "second bunch compressor"}, {"L3", "main linac"},
      {"CL", "collimation"},       {"TL", "beam distribution"}};
  return kSections;
}

}  // namespace synth_detail

// FACILITY/DEVICE/LOCATION/PROPERTY space. Every location number is unique
// and at least 23, so it never collides with other numerals in a query.
inline json explorer_config() {
  using namespace synth_detail;
  struct Facility {
    const char* value;
    const char* description;
    std::vector<std::string> devices;
  };
  const std::vector<Facility> facilities = {
      {"XFEL.DIAG", "XFEL diagnostics", {"CAMERA", "BPM", "TOROID", "BLM"}},
      {"XFEL.MAGNETS", "XFEL magnets", {"QUAD", "CORR"}},
      {"XFEL.RF", "XFEL radio frequency", {"LLRF", "KLYSTRON"}},
      {"XFEL.VAC", "XFEL vacuum", {"GAUGE", "PUMP", "VALVE"}},
      {"FLASH.DIAG", "FLASH diagnostics", {"CAMERA", "BPM", "TOROID"}},
  };
  long position = 23;
  const long steps[] = {7, 11, 13, 17};
  std::size_t step_i = 0, section_i = 0;
  json tree = json::array();
  for (const auto& f : facilities) {
    json devices = json::array();
    for (const auto& dv : f.devices) {
      const auto& spec = *std::find_if(device_catalogue().begin(), device_catalogue().end(),
                                       [&](const DeviceSpec& d) { return dv == d.value; });
      json props = json::array();
      for (const auto& p : spec.properties) props.push_back(node("property", p.value, p.description));
      json locs = json::array();
      for (int i = 0; i < spec.locations; ++i) {
        const auto& [code, sdesc] = sections()[section_i++ % sections().size()];
        const std::string value = std::string(spec.location_code) + "." + std::to_string(position) + "." + code;
        const std::string desc = std::string(spec.location_kind) + " at " + std::to_string(position) + " m in " + sdesc;
        locs.push_back(node("location", value, desc, props));
        position += steps[step_i++ % 4];
      }
      devices.push_back(node("device", spec.value, spec.description, locs));
    }
    tree.push_back(node("facility", f.value, f.description, devices));
  }
  return {{"name", "explorer"},
          {"schema", {{"levels", json::array({"facility", "device", "location", "property"})}, {"pattern", "{0}/{1}/{2}/{3}"}}},
          {"tree", tree}};
}

// ---- middle layer -----------------------------------------------------------

namespace synth_detail {

struct FieldSpec {
  const char* name;
  const char* description;
  const char* code;
};

struct FamilySpec {
  const char* name;
  const char* description;
  int per_sector;
  std::vector<FieldSpec> fields;
};

struct SystemSpec {
  const char* name;
  const char* description;
  int sectors;
  std::vector<FamilySpec> families;
};

inline std::vector<FieldSpec> magnet_fields() {
  return {{"Setpoint", "current setpoint", "AC"}, {"Monitor", "current readback", "AM"}};
}
inline std::vector<FieldSpec> bpm_fields() {
  return {{"X", "horizontal position", "X"}, {"Y", "vertical position", "Y"}};
}

inline std::vector<SystemSpec> mml_layout() {
  const FamilySpec bpm{"BPM", "beam position monitor", 0, bpm_fields()};
  const FamilySpec hcm{"HCM", "horizontal corrector magnet", 0, magnet_fields()};
  const FamilySpec vcm{"VCM", "vertical corrector magnet", 0, magnet_fields()};
  auto with = [](FamilySpec f, int n) {
    f.per_sector = n;
    return f;
  };
  return {
      {"SR", "storage ring", 12,
       {with(bpm, 8), with(hcm, 4), with(vcm, 4),
        {"QF", "focusing quadrupole magnet", 2, magnet_fields()},
        {"QD", "defocusing quadrupole magnet", 2, magnet_fields()},
        {"SF", "focusing sextupole magnet", 2, magnet_fields()},
        {"SD", "defocusing sextupole magnet", 2, magnet_fields()},
        {"BEND", "bending dipole magnet", 3, magnet_fields()},
        {"DCCT", "beam current transformer", -1, {{"Monitor", "stored beam current", "AM"}}},
        {"RF", "radio frequency cavity", -2,
         {{"Voltage", "gap voltage", "VOLT"}, {"Phase", "cavity phase", "PHS"}, {"Frequency", "master oscillator frequency", "FREQ"}}}}},
      {"BR", "booster synchrotron", 4,
       {with(bpm, 4), with(hcm, 2), with(vcm, 2),
        {"QF", "focusing quadrupole magnet", 2, magnet_fields()},
        {"QD", "defocusing quadrupole magnet", 2, magnet_fields()},
        {"BEND", "bending dipole magnet", 4, magnet_fields()},
        {"RF", "radio frequency cavity", -1,
         {{"Voltage", "gap voltage", "VOLT"}, {"Phase", "cavity phase", "PHS"}, {"Frequency", "master oscillator frequency", "FREQ"}}}}},
      {"BTS", "extraction transfer line", 1,
       {with(bpm, 6), with(hcm, 4), with(vcm, 4), {"QUAD", "transport quadrupole magnet", 6, magnet_fields()},
        {"BEND", "bending dipole magnet", 2, magnet_fields()}}},
      {"LTB", "injection transfer line", 1,
       {with(bpm, 4), with(hcm, 3), with(vcm, 3), {"QUAD", "transport quadrupole magnet", 5, magnet_fields()},
        {"BEND", "bending dipole magnet", 2, magnet_fields()}}},
      {"GTL", "electron gun", 1,
       {{"SOL", "focusing solenoid", 4, magnet_fields()}, with(bpm, 2), with(hcm, 2), with(vcm, 2),
        {"GUN", "thermionic cathode", 1,
         {{"Setpoint", "voltage setpoint", "AC"}, {"Monitor", "voltage readback", "AM"}, {"Bias", "grid bias voltage", "BIAS"}}}}},
      {"LN", "linear accelerator", 1,
       {{"ACC", "accelerating section", 3, {{"Amplitude", "field amplitude", "AMP"}, {"Phase", "field phase", "PHS"}}},
        {"QUAD", "matching quadrupole magnet", 4, magnet_fields()}, with(bpm, 3), with(hcm, 3), with(vcm, 3)}},
  };
}

}  // namespace synth_detail

// Negative per_sector means a fixed device count for the whole system.
inline json mml_config(int scale = 1) {
  using namespace synth_detail;
  json systems = json::array();
  for (const auto& s : mml_layout()) {
    json fams = json::array();
    for (const auto& f : s.families) {
      json devices = json::array();
      int element = 0;
      if (f.per_sector < 0) {
        for (int n = 1; n <= -f.per_sector; ++n) devices.push_back({{"element", ++element}, {"sector", 1}, {"number", n}});
      } else {
        for (int sec = 1; sec <= s.sectors; ++sec)
          for (int n = 1; n <= f.per_sector * scale; ++n)
            devices.push_back({{"element", ++element}, {"sector", sec}, {"number", n}});
      }
      json fields = json::array();
      for (const auto& fld : f.fields)
        fields.push_back({{"name", fld.name},
                          {"description", fld.description},
                          {"pattern", std::string(s.name) + "{sector:02}C:" + f.name + "{number}:" + fld.code}});
      fams.push_back({{"name", f.name}, {"description", f.description}, {"devices", devices}, {"fields", fields}});
    }
    systems.push_back({{"name", s.name}, {"description", s.description}, {"families", fams}});
  }
  return {{"name", "mml"}, {"systems", systems}};
}

inline json mml_keyword_config() {
  return {{"systems",
           {{"SR", {"storage ring", "storage", "sr"}},
            {"BR", {"booster", "br"}},
            {"BTS", {"extraction", "bts"}},
            {"LTB", {"injection", "ltb"}},
            {"GTL", {"electron gun", "gun", "gtl"}},
            {"LN", {"linear accelerator", "linear", "linac", "ln"}}}},
          {"query_types",
           {{"beam-position", {"bpm", "bpms", "beam position", "orbit", "position"}},
            {"magnet", {"magnet", "magnets", "corrector", "quadrupole", "sextupole", "dipole", "solenoid"}},
            {"rf", {"radio frequency", "cavity", "rf", "accelerating"}},
            {"beam-current", {"dcct", "current transformer", "stored beam current"}}}}};
}

// Worked examples replayed from the tree itself, so answers always agree
// with the tools. Two per system plus a generic set.
inline json mml_examples_config(const MmlTree& tree) {
  json out = json::array();
  MmlTools tools(tree);
  auto query_type = [](const std::string& family) -> std::string {
    if (family == "BPM") return "beam-position";
    if (family == "DCCT") return "beam-current";
    if (family == "RF" || family == "ACC") return "rf";
    return "magnet";
  };
  auto add = [&](const MmlSystem& s, const MmlFamily& f, const MmlField& fld, std::optional<int> element, const std::string& tag) {
    json args = {{"system", s.name}, {"family", f.name}, {"field", fld.name}};
    std::string q = s.description + " " + f.description + " " + fld.description;
    if (element) {
      args["elements"] = json::array({*element});
      q += " element " + std::to_string(*element);
    }
    json seq = json::array({{{"tool", "list_systems"}, {"arguments", json::object()}},
                            {{"tool", "list_families"}, {"arguments", {{"system", s.name}}}},
                            {{"tool", "list_fields"}, {"arguments", {{"system", s.name}, {"family", f.name}}}},
                            {{"tool", "get_indices"}, {"arguments", {{"system", s.name}, {"family", f.name}}}},
                            {{"tool", "get_channels"}, {"arguments", args}}});
    std::vector<std::string> answer;
    for (const auto& c : tools.call("get_channels", args)) answer.push_back(c.at("address").get<std::string>());
    out.push_back({{"query", q}, {"system", tag}, {"query_type", query_type(f.name)}, {"tools", seq}, {"answer", answer}});
  };
  for (const auto& s : tree.systems()) {
    if (s.families.empty()) continue;
    const auto& f0 = s.families.front();
    add(s, f0, f0.fields.front(), std::nullopt, s.name);
    const auto& f1 = s.families.size() > 1 ? s.families[1] : f0;
    add(s, f1, f1.fields.back(), f1.devices.empty() ? std::nullopt : std::optional<int>(f1.devices.back().element), s.name);
  }
  // Generic examples used when no system is detected.
  const auto& sr = tree.systems().front();
  add(sr, sr.families.front(), sr.families.front().fields.front(), std::optional<int>(1), "generic");
  if (tree.systems().size() > 1) {
    const auto& s2 = tree.systems()[1];
    add(s2, s2.families.back(), s2.families.back().fields.front(), std::nullopt, "generic");
  }
  return {{"examples", out}};
}

inline MiddleLayer make_middle_layer(int scale = 1) {
  auto tree = load_mml(mml_config(scale));
  auto examples = load_examples(mml_examples_config(tree));
  return MiddleLayer(std::move(tree), load_keyword_map(mml_keyword_config()), std::move(examples));
}

// ---- toy graphs for ontology portability ----------------------------------

struct ToyGraph {
  DatabasePtr db;
  OntologyMapping mapping;
  std::vector<std::string> magnet_setpoints;  // answer key: setting channels of every magnet
};

// Flat inventory, suffix-role driven, families mapped straight onto core classes.
inline json toy_graph_a_config() {
  json channels = json::array();
  struct Fam {
    const char* family;
    const char* prefix;
    const char* what;
    int count;
    bool magnet;
  };
  const Fam fams[] = {{"QB", "MQB", "quadrupole", 4, true},
                      {"MBH", "MBH", "horizontal corrector", 3, true},
                      {"MBV", "MBV", "vertical corrector", 3, true},
                      {"MBD", "MBD", "dipole", 2, true},
                      {"IPM", "IPM", "beam position monitor", 3, false}};
  for (const auto& f : fams)
    for (int i = 1; i <= f.count; ++i) {
      const std::string dev = std::string(f.prefix) + "1S0" + std::to_string(i);
      auto add = [&](const std::string& addr, const std::string& role, const std::string& desc) {
        channels.push_back({{"address", addr},
                            {"description", desc},
                            {"role", role},
                            {"metadata", {{"family", f.family}, {"device", dev}}}});
      };
      if (f.magnet) {
        add(dev + ".S", "setpoint", std::string(f.what) + " " + std::to_string(i) + " current setpoint");
        add(dev + "M", "readback", std::string(f.what) + " " + std::to_string(i) + " current readback");
      } else {
        add(dev + "XPOS", "readback", std::string(f.what) + " " + std::to_string(i) + " horizontal position");
        add(dev + "YPOS", "readback", std::string(f.what) + " " + std::to_string(i) + " vertical position");
      }
    }
  return {{"name", "toy-a"}, {"channels", channels}};
}

inline json toy_graph_a_mapping() {
  return {{"instance_prefix", "dev:"},
          {"classes",
           {{"QB", "core:Quadrupole"}, {"MBH", "core:HorizontalCorrector"}, {"MBV", "core:VerticalCorrector"},
            {"MBD", "core:Dipole"}, {"IPM", "core:BPM"}}},
          {"prefixes", {{"dev", "urn:toy-a:device#"}}}};
}

// Middle-layer companion db; roles come from the field name and the facility
// declares its own classes beneath the core ones.
inline json toy_graph_b_tree() {
  json cfg = mml_config(1);
  json systems = json::array();
  for (auto& s : cfg.at("systems"))
    if (s.at("name") == "BR") systems.push_back(s);
  return {{"name", "toy-b"}, {"systems", systems}};
}

inline json toy_graph_b_mapping() {
  return {{"instance_prefix", "als:dev-"},
          {"role_key", "field"},
          {"classes",
           {{"QF", "als:QF"}, {"QD", "als:QD"}, {"HCM", "als:HCM"}, {"VCM", "als:VCM"}, {"BEND", "als:BEND"},
            {"BPM", "als:BPM"}, {"RF", "als:RF"}}},
          {"roles",
           {{"Setpoint", "core:hasSetpoint"}, {"Monitor", "core:hasReadback"}, {"X", "core:hasReadback"},
            {"Y", "core:hasReadback"}, {"Voltage", "core:hasSetpoint"}, {"Phase", "core:hasSetpoint"},
            {"Frequency", "core:hasSetpoint"}}},
          {"prefixes", {{"als", "urn:toy-b:als#"}}},
          {"extra_triples",
           json::array({json::array({"als:QF", "rdfs:subClassOf", "core:Quadrupole"}),
                        json::array({"als:QD", "rdfs:subClassOf", "core:Quadrupole"}),
                        json::array({"als:HCM", "rdfs:subClassOf", "core:HorizontalCorrector"}),
                        json::array({"als:VCM", "rdfs:subClassOf", "core:VerticalCorrector"}),
                        json::array({"als:BEND", "rdfs:subClassOf", "core:Dipole"}),
                        json::array({"als:BPM", "rdfs:subClassOf", "core:BPM"}),
                        json::array({"als:RF", "rdfs:subClassOf", "core:Cavity"})})}};
}

inline ToyGraph toy_graph_a() {
  ToyGraph g{load_database(toy_graph_a_config()), load_mapping(toy_graph_a_mapping()), {}};
  for (const auto& r : g.db->records())
    if (r.suffix_role == SuffixRole::kSetpoint && r.metadata.at("family") != "IPM") g.magnet_setpoints.push_back(r.address);
  std::sort(g.magnet_setpoints.begin(), g.magnet_setpoints.end());
  return g;
}

inline ToyGraph toy_graph_b() {
  const auto tree = load_mml(toy_graph_b_tree());
  ToyGraph g{companion_database(tree), load_mapping(toy_graph_b_mapping()), {}};
  for (const auto& s : tree.systems())
    for (const auto& f : s.families) {
      if (f.name == "BPM" || f.name == "RF") continue;
      for (const auto& fld : f.fields)
        if (fld.name == "Setpoint") g.magnet_setpoints.insert(g.magnet_setpoints.end(), fld.addresses.begin(), fld.addresses.end());
    }
  std::sort(g.magnet_setpoints.begin(), g.magnet_setpoints.end());
  return g;
}

}  // namespace chanfind
