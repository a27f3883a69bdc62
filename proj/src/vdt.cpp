#include "vdt.hpp"

#include <sstream>

namespace ttc {

namespace {

bool is_power_of_two(Index x) { return x >= 1 && (x & (x - 1)) == 0; }

std::vector<Index> parse_factor_list(const std::string& text,
                                     const std::string& what) {
  std::vector<Index> out;
  if (text.empty()) return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t pos = 0;
      const long long v = std::stoll(item, &pos);
      require(pos == item.size() && v >= 1, Errc::parse,
              "bad " + what + " factor '" + item + "'");
      out.push_back(static_cast<Index>(v));
    } catch (const Error&) {
      throw;
    } catch (...) {
      fail(Errc::parse, "bad " + what + " factor '" + item + "'");
    }
  }
  require(!out.empty(), Errc::parse, what + " factor list is empty");
  return out;
}

std::vector<Index> inverse_perm(const std::vector<Index>& p) {
  std::vector<Index> inv(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) inv[p[k]] = static_cast<Index>(k);
  return inv;
}

}  // namespace

VdtPlan::VdtPlan(std::vector<Index> u_factors, std::vector<Index> v_factors,
                 std::vector<Index> trailing_dims)
    : u_(std::move(u_factors)),
      v_(std::move(v_factors)),
      trailing_(std::move(trailing_dims)) {
  require(!u_.empty() && u_.size() == v_.size(), Errc::invalid_argument,
          "u and v factor lists must be non-empty and the same length");
  for (Index f : u_)
    require(f >= 1, Errc::invalid_argument, "u factors must be >= 1");
  for (Index f : v_)
    require(f >= 1, Errc::invalid_argument, "v factors must be >= 1");
  for (Index d : trailing_)
    require(d >= 1, Errc::invalid_argument, "trailing dims must be >= 1");
}

VdtPlan VdtPlan::auto_plan(Index u, Index v, std::vector<Index> trailing_dims) {
  require(u == v, Errc::invalid_argument,
          "auto plan requires square image modes");
  require(is_power_of_two(u) && is_power_of_two(v), Errc::invalid_argument,
          "auto plan requires power-of-two image modes");
  Index l = 0;
  for (Index x = u; x > 1; x >>= 1) ++l;
  l = std::max<Index>(l, 1);
  return VdtPlan(std::vector<Index>(static_cast<std::size_t>(l), u == 1 ? 1 : 2),
                 std::vector<Index>(static_cast<std::size_t>(l), v == 1 ? 1 : 2),
                 std::move(trailing_dims));
}

VdtPlan VdtPlan::parse(const std::string& line) {
  std::string u_text, v_text, trailing_text;
  std::stringstream ss(line);
  std::string token;
  bool saw_u = false, saw_v = false;
  while (ss >> token) {
    if (token.rfind("u=", 0) == 0) {
      u_text = token.substr(2);
      saw_u = true;
    } else if (token.rfind("v=", 0) == 0) {
      v_text = token.substr(2);
      saw_v = true;
    } else if (token.rfind("trailing=", 0) == 0) {
      trailing_text = token.substr(9);
    } else {
      fail(Errc::parse, "unrecognized plan token '" + token + "'");
    }
  }
  require(saw_u && saw_v, Errc::parse, "plan needs u= and v= factor lists");
  std::vector<Index> trailing;
  if (!trailing_text.empty())
    trailing = parse_factor_list(trailing_text, "trailing");
  return VdtPlan(parse_factor_list(u_text, "u"), parse_factor_list(v_text, "v"),
                 std::move(trailing));
}

std::string VdtPlan::to_string() const {
  std::ostringstream out;
  const auto join = [&](const std::vector<Index>& xs) {
    for (std::size_t i = 0; i < xs.size(); ++i)
      out << (i ? "," : "") << xs[i];
  };
  out << "u=";
  join(u_);
  out << " v=";
  join(v_);
  if (!trailing_.empty()) {
    out << " trailing=";
    join(trailing_);
  }
  return out.str();
}

std::vector<Index> VdtPlan::input_dims() const {
  std::vector<Index> dims{u(), v()};
  dims.insert(dims.end(), trailing_.begin(), trailing_.end());
  return dims;
}

std::vector<Index> VdtPlan::split_dims() const {
  std::vector<Index> dims(u_);
  dims.insert(dims.end(), v_.begin(), v_.end());
  dims.insert(dims.end(), trailing_.begin(), trailing_.end());
  return dims;
}

std::vector<Index> VdtPlan::interleave() const {
  const Index l = block_levels();
  std::vector<Index> p;
  p.reserve(u_.size() * 2 + trailing_.size());
  for (Index k = 0; k < l; ++k) {
    p.push_back(k);
    p.push_back(l + k);
  }
  for (std::size_t k = 0; k < trailing_.size(); ++k)
    p.push_back(2 * l + static_cast<Index>(k));
  return p;
}

std::vector<Index> VdtPlan::output_dims() const {
  std::vector<Index> dims;
  dims.reserve(u_.size() + trailing_.size());
  for (std::size_t k = 0; k < u_.size(); ++k) dims.push_back(u_[k] * v_[k]);
  dims.insert(dims.end(), trailing_.begin(), trailing_.end());
  return dims;
}

DenseTensor apply_vdt(const DenseTensor& t, const VdtPlan& plan) {
  require(t.dims() == plan.input_dims(), Errc::shape_mismatch,
          "tensor dims do not match the VDT plan input");
  DenseTensor split = reshape(t, plan.split_dims());
  DenseTensor mixed = permute_axes(split, plan.interleave());
  return reshape(mixed, plan.output_dims());
}

DenseTensor invert_vdt(const DenseTensor& t, const VdtPlan& plan) {
  require(t.dims() == plan.output_dims(), Errc::shape_mismatch,
          "tensor dims do not match the VDT plan output");
  const auto perm = plan.interleave();
  // Undo the fusing reshape: interleaved split dims.
  std::vector<Index> mixed_dims(perm.size());
  const auto split = plan.split_dims();
  for (std::size_t k = 0; k < perm.size(); ++k) mixed_dims[k] = split[perm[k]];
  DenseTensor mixed = reshape(t, std::move(mixed_dims));
  DenseTensor unsplit = permute_axes(mixed, inverse_perm(perm));
  return reshape(unsplit, plan.input_dims());
}

}  // namespace ttc
