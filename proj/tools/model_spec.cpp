#include "model_spec.hpp"

#include <sstream>
#include <vector>

namespace axswap::cli {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

[[noreturn]] void bad_spec(const std::string& spec, const std::string& why) {
  throw std::invalid_argument("bad model spec '" + spec + "': " + why);
}

std::pair<int, Signedness> parse_width_sign(const std::string& spec, const std::string& token) {
  if (token.size() < 2) bad_spec(spec, "expected <width><u|s> like 8u");
  const char sign_char = token.back();
  if (sign_char != 'u' && sign_char != 's') bad_spec(spec, "signedness must be u or s");
  int width = 0;
  for (char c : token.substr(0, token.size() - 1)) {
    if (!std::isdigit(static_cast<unsigned char>(c))) bad_spec(spec, "bad width");
    width = width * 10 + (c - '0');
  }
  return {width, sign_char == 's' ? Signedness::Signed : Signedness::Unsigned};
}

int parse_int_param(const std::string& spec, const std::string& token, const std::string& key) {
  if (!token.starts_with(key + "=")) bad_spec(spec, "expected " + key + "=<value>");
  return std::stoi(token.substr(key.size() + 1));
}

}  // namespace

MultiplierModel parse_model_spec(const std::string& spec) {
  const auto parts = split(spec, ':');
  const std::string& kind = parts[0];
  if (kind == "table") {
    if (parts.size() < 2) bad_spec(spec, "expected table:<path>");
    const std::string path = spec.substr(6);  // keep any ':' inside the path
    const auto [width, sign] = peek_axtt_header(path);
    return load_truth_table(path, width, sign);
  }
  if (parts.size() < 2) bad_spec(spec, "expected <kind>:<width><u|s>");
  const auto [width, sign] = parse_width_sign(spec, parts[1]);
  if (kind == "exact") {
    if (parts.size() != 2) bad_spec(spec, "exact takes no parameters");
    return MultiplierModel::exact(width, sign);
  }
  if (kind == "trunca" || kind == "truncb") {
    if (parts.size() != 3) bad_spec(spec, "expected :k=<dropped LSBs>");
    const int k = parse_int_param(spec, parts[2], "k");
    return MultiplierModel::truncate_operand(width, sign, kind == "trunca" ? Operand::A : Operand::B, k);
  }
  if (kind == "droppp") {
    if (parts.size() != 3) bad_spec(spec, "expected :mask=r.c,r.c,...");
    if (!parts[2].starts_with("mask=")) bad_spec(spec, "expected mask=<positions>");
    std::vector<std::pair<int, int>> dropped;
    const std::string list = parts[2].substr(5);
    if (!list.empty())
      for (const std::string& pos : split(list, ',')) {
        const auto rc = split(pos, '.');
        if (rc.size() != 2) bad_spec(spec, "positions are row.col");
        dropped.emplace_back(std::stoi(rc[0]), std::stoi(rc[1]));
      }
    return MultiplierModel::drop_partial_products(width, sign, PartialProductMask(width, dropped));
  }
  bad_spec(spec, "unknown kind '" + kind + "'");
}

SwapPolicy parse_policy_spec(const std::string& spec) {
  const auto parts = split(spec, ':');
  if (parts.size() != 3 || (parts[0] != "A" && parts[0] != "B"))
    throw std::invalid_argument("bad policy spec '" + spec + "': expected A|B:<bit>:<0|1>");
  SwapPolicy p;
  p.operand = parts[0] == "A" ? Operand::A : Operand::B;
  p.bit_index = std::stoi(parts[1]);
  p.trigger_value = std::stoi(parts[2]);
  if (p.trigger_value != 0 && p.trigger_value != 1)
    throw std::invalid_argument("bad policy spec '" + spec + "': trigger must be 0 or 1");
  return p;
}

WideMulConfig parse_wide_config(const MultiplierModel& model, const std::string& parts, const std::string& shift) {
  ShiftMode mode;
  if (shift == "fidelity")
    mode = ShiftMode::Fidelity;
  else if (shift == "exact-fit")
    mode = ShiftMode::ExactFit;
  else
    throw std::invalid_argument("shift mode must be fidelity or exact-fit, got '" + shift + "'");

  if (parts == "all") return WideMulConfig::uniform(model, ApproxSet::All, mode);
  if (parts == "mdlo") return WideMulConfig::uniform(model, ApproxSet::MdLo, mode);
  if (parts.starts_with("custom:")) {
    std::set<WidePart> chosen;
    const std::string list = parts.substr(7);
    if (!list.empty())  // "custom:" alone approximates nothing
      for (const std::string& name : split(list, ',')) {
        const auto p = part_from_name(name);
        if (!p) throw std::invalid_argument("unknown part '" + name + "' (HI, MD1, MD2, LO)");
        chosen.insert(*p);
      }
    return WideMulConfig::uniform_custom(model, std::move(chosen), mode);
  }
  throw std::invalid_argument("parts must be all, mdlo or custom:<list>, got '" + parts + "'");
}

}  // namespace axswap::cli
