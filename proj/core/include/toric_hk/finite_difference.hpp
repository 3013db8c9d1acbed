#pragma once

#include <functional>

#include "toric_hk/point.hpp"

namespace toric_hk::fd {

using ScalarField = std::function<double(const Vec&)>;

// Central differences, O(h^2).
Vec gradient(const ScalarField& f, const Vec& at, double h);
Mat hessian(const ScalarField& f, const Vec& at, double h);

// Richardson-extrapolated Hessian from steps h and h/2, O(h^4).
Mat hessian_richardson(const ScalarField& f, const Vec& at, double h);

// 7-point Laplacian of a function of three variables.
double laplacian3(const std::function<double(double, double, double)>& f, double h);

}  // namespace toric_hk::fd
