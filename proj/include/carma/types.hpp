#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace carma {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// A point in the compact parameter box Theta together with the box bounds.
struct ThetaParam {
    Vector values;
    Vector lower;
    Vector upper;

    ThetaParam() = default;
    ThetaParam(Vector v, Vector lo, Vector hi)
        : values(std::move(v)), lower(std::move(lo)), upper(std::move(hi)) {
        validate();
    }

    Eigen::Index dim() const { return values.size(); }

    bool in_box(double tol = 0.0) const {
        for (Eigen::Index i = 0; i < values.size(); ++i) {
            if (values[i] < lower[i] - tol || values[i] > upper[i] + tol) return false;
        }
        return true;
    }

    void validate() const {
        if (values.size() < 1) throw std::invalid_argument("ThetaParam: empty parameter vector");
        if (lower.size() != values.size() || upper.size() != values.size())
            throw std::invalid_argument("ThetaParam: bound dimensions do not match values");
        if (!in_box()) throw std::invalid_argument("ThetaParam: values outside the box");
    }
};

enum class DriverKind { Brownian, Nig };

struct SeriesMeta {
    DriverKind driver = DriverKind::Brownian;
    std::uint64_t seed = 0;
    bool contaminated = false;
};

/// Equidistant observations Y_h, ..., Y_nh of a (possibly contaminated) process.
struct SampledSeries {
    double h = 1.0;
    std::vector<double> values;
    SeriesMeta meta;

    std::size_t size() const { return values.size(); }
};

}  // namespace carma
