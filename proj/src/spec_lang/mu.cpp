#include "symaut/spec_lang/mu.hpp"

#include <algorithm>

namespace symaut {

MuFunction::MuFunction(Variant v) : v_(std::move(v)) {
  if (const auto* f = std::get_if<Box>(&v_)) {
    if (f->proj.empty() || f->lo.size() != f->proj.size() || f->hi.size() != f->proj.size()) {
      throw ShapeError("box atom '" + f->name + "' needs matching lo, hi and proj of length >= 1");
    }
  } else if (const auto* f = std::get_if<Ball>(&v_)) {
    if (f->proj.empty() || f->center.size() != f->proj.size()) {
      throw ShapeError("ball atom '" + f->name + "' needs matching center and proj");
    }
  } else if (const auto* f = std::get_if<Negated>(&v_)) {
    if (!f->inner) throw ShapeError("negated atom without operand");
  }
}

MuFunction MuFunction::affine(std::vector<double> w, double b) {
  return MuFunction(Affine{std::move(w), b});
}

MuFunction MuFunction::box(std::string name, std::vector<double> lo, std::vector<double> hi,
                           std::vector<std::size_t> proj) {
  return MuFunction(Box{std::move(name), std::move(lo), std::move(hi), std::move(proj)});
}

MuFunction MuFunction::ball(std::string name, std::vector<double> center, double radius,
                            std::vector<std::size_t> proj) {
  return MuFunction(Ball{std::move(name), std::move(center), radius, std::move(proj)});
}

MuFunction MuFunction::negated(const MuFunction& inner) {
  if (const auto* f = std::get_if<Affine>(&inner.v_)) {
    Affine neg{f->w, -f->b};
    for (double& w : neg.w) w = -w;
    return MuFunction(std::move(neg));
  }
  if (const auto* f = std::get_if<Negated>(&inner.v_)) return *f->inner;
  return MuFunction(Negated{std::make_shared<const MuFunction>(inner)});
}

MuFunction MuFunction::tightened(double margin) const {
  if (const auto* f = std::get_if<Affine>(&v_)) return affine(f->w, f->b - margin);
  if (const auto* f = std::get_if<Box>(&v_)) {
    Box b = *f;
    for (auto& v : b.lo) v += margin;
    for (auto& v : b.hi) v -= margin;
    return MuFunction(std::move(b));
  }
  if (const auto* f = std::get_if<Ball>(&v_)) return ball(f->name, f->center, f->radius - margin, f->proj);
  return negated(std::get<Negated>(v_).inner->tightened(-margin));
}

std::size_t MuFunction::min_state_dim() const {
  auto max_index = [](const std::vector<std::size_t>& proj) {
    return proj.empty() ? std::size_t{0} : *std::max_element(proj.begin(), proj.end()) + 1;
  };
  if (const auto* f = std::get_if<Affine>(&v_)) return f->w.size();
  if (const auto* f = std::get_if<Box>(&v_)) return max_index(f->proj);
  if (const auto* f = std::get_if<Ball>(&v_)) return max_index(f->proj);
  return std::get<Negated>(v_).inner->min_state_dim();
}

}  // namespace symaut
