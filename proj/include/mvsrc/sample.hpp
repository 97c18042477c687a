#pragma once

#include <string>
#include <vector>

namespace mvsrc {

enum class Role { Train, Test };

// One vectorized image (or synthetic vector) tagged with its class and view.
// Labels are opaque strings; `source` is "synthetic" or the file it came from.
struct Sample {
  std::string class_id;
  std::string view_id;
  std::vector<double> values;
  Role role = Role::Train;
  std::string source = "synthetic";
};

// Orders labels numerically when both parse as integers, otherwise
// lexicographically, so "2" < "10" and "a" < "b".
bool label_less(const std::string& a, const std::string& b);

}  // namespace mvsrc
