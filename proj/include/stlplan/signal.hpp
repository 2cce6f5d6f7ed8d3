#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace stlplan {

/// Uniformly sampled multi-channel signal. Sample k sits at t_k = k * dt.
///
/// Storage is channel-major so a whole channel can be handed out as a span.
class Signal {
 public:
  Signal() = default;
  Signal(double dt, std::vector<std::string> channel_names, std::size_t length);

  double dt() const { return dt_; }
  std::size_t length() const { return length_; }
  std::size_t channel_count() const { return names_.size(); }
  const std::vector<std::string>& channel_names() const { return names_; }
  const std::string& channel_name(std::size_t ch) const { return names_[ch]; }

  /// Index of a channel by name; throws std::out_of_range when unknown.
  std::size_t index_of(std::string_view name) const;
  bool has_channel(std::string_view name) const;

  double at(std::size_t ch, std::size_t k) const { return data_[ch * length_ + k]; }
  double& at(std::size_t ch, std::size_t k) { return data_[ch * length_ + k]; }

  std::span<const double> channel(std::size_t ch) const {
    return {data_.data() + ch * length_, length_};
  }
  std::span<double> channel(std::size_t ch) { return {data_.data() + ch * length_, length_}; }

  std::span<const double> samples() const { return data_; }

  /// Same layout, all samples zero.
  Signal zeros_like() const;

 private:
  double dt_ = 1.0;
  std::size_t length_ = 0;
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::size_t> lookup_;
  std::vector<double> data_;
};

}  // namespace stlplan
