#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace wavemol {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

namespace constants {
// CODATA 2018
inline constexpr double hartree_joule = 4.3597447222071e-18;
inline constexpr double amu_kg = 1.66053906660e-27;
inline constexpr double c_cm_per_s = 2.99792458e10;
inline constexpr double bohr_angstrom = 0.529177210903;
inline constexpr double kcal_mol_hartree = 1.0 / 627.509474;
inline constexpr double mass_H = 1.00782503;
inline constexpr double mass_Li = 7.01600343;
inline constexpr double mass_O = 15.99491462;
}  // namespace constants

// Counter-based seed splitting: every consumer derives its own stream from
// (root seed, stream id) so parallel tasks stay deterministic.
inline std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream) {
  return std::mt19937_64(split_seed(seed, stream));
}

}  // namespace wavemol
