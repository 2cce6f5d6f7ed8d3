#include "stlplan/signal.hpp"

#include <algorithm>
#include <stdexcept>

namespace stlplan {

Signal::Signal(double dt, std::vector<std::string> channel_names, std::size_t length)
    : dt_(dt), length_(length), names_(std::move(channel_names)) {
  if (!(dt > 0.0)) throw std::invalid_argument("signal sampling period must be positive");
  if (length == 0) throw std::invalid_argument("signal needs at least one sample");
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (!lookup_.emplace(names_[i], i).second) {
      throw std::invalid_argument("duplicate signal channel '" + names_[i] + "'");
    }
  }
  data_.assign(names_.size() * length_, 0.0);
}

std::size_t Signal::index_of(std::string_view name) const {
  auto it = lookup_.find(std::string(name));
  if (it == lookup_.end()) throw std::out_of_range("unknown signal channel '" + std::string(name) + "'");
  return it->second;
}

bool Signal::has_channel(std::string_view name) const {
  return lookup_.count(std::string(name)) != 0;
}

Signal Signal::zeros_like() const {
  Signal out = *this;
  std::fill(out.data_.begin(), out.data_.end(), 0.0);
  return out;
}

}  // namespace stlplan
