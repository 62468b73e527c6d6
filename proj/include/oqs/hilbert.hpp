#pragma once

#include <string>
#include <vector>

#include "oqs/linalg.hpp"

namespace oqs {

// Site 0 is the slowest-varying tensor index.
struct SpaceLayout {
  std::vector<int> dims;
  std::vector<std::string> labels;

  SpaceLayout() = default;
  SpaceLayout(std::vector<int> d, std::vector<std::string> l = {});
  Index total() const;
  int sites() const { return static_cast<int>(dims.size()); }
  int site(const std::string& label) const;
};

enum class OpKind { pauli_x, pauli_y, pauli_z, raise, lower, annihilate, create, number, ketbra };

// Qubit basis: |0> is down, |1> is up; sigma_z = diag(-1, 1).
// raise/lower are unit-amplitude shifts; ketbra(a, b) = |a><b|.
Mat local_operator(OpKind kind, int dim, int a = 0, int b = 0);

Mat sigma_x();
Mat sigma_y();
Mat sigma_z();
Mat sigma_plus();
Mat sigma_minus();
Mat destroy(int dim);
Mat ketbra(int dim, int a, int b);

Mat embed(const Mat& op, int site, const SpaceLayout& layout);
SpMat embed_sparse(const SpMat& op, int site, const SpaceLayout& layout);

// Kept sites are returned in layout order.
Mat partial_trace(const Mat& rho, std::vector<int> keep, const SpaceLayout& layout);

int oscillator_truncation(double nbar, double p_cut = 1e-3);

// temperature == 0 gives the uniform mixture over the ground manifold.
Mat thermal_state(const Mat& h, double temperature);

Vec basis_state(const SpaceLayout& layout, const std::vector<int>& levels);
Mat projector(const Vec& psi);

}  // namespace oqs
