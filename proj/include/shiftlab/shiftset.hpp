#pragma once

#include <string>
#include <vector>

namespace shiftlab {

// Set of distances at which shifted generators pick up the anticommutation
// phase.  Either an explicit strictly-increasing list or the unbounded
// triangular preset {1, 3, 6, 10, 15, ...} with membership by formula
// (d is triangular iff 8d+1 is a perfect square).
class ShiftSet {
 public:
  ShiftSet() = default;

  static ShiftSet triangular_preset();
  static ShiftSet explicit_set(std::vector<long> elems);  // validates

  bool contains(long d) const;
  bool unbounded() const { return kind_ == Kind::Triangular; }
  // Elements up to and including bound (generated for the preset).
  std::vector<long> elements_up_to(long bound) const;
  // Largest element of an explicit set; meaningless for the preset.
  long max_element() const;
  std::string to_string() const;
  bool operator==(const ShiftSet& o) const;

 private:
  enum class Kind { Triangular, Explicit };
  Kind kind_ = Kind::Triangular;
  std::vector<long> elems_;
};

// First `count` triangular numbers as an explicit ShiftSet.
ShiftSet triangular_set(int count);

// True iff strictly increasing positive integers with strictly increasing
// consecutive gaps.
bool validate_shift_set(const std::vector<long>& elements);

}  // namespace shiftlab
