#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace resonance {

/// Pointed homotopy type of the spaces that occur as Conley indices here:
/// either the one-point type 0 or a finite wedge of spheres.  Stored as the
/// sorted multiset of sphere dimensions; the empty multiset is the zero
/// type (note Sigma^0 is the two-point sphere, not zero).
class HomotopyType {
public:
    HomotopyType() = default;

    static HomotopyType zero() { return HomotopyType{}; }

    static HomotopyType sphere(int dim) {
        if (dim < 0) throw std::invalid_argument("sphere dimension must be >= 0");
        HomotopyType t;
        t.dims_ = {dim};
        return t;
    }

    static HomotopyType wedge_of(std::vector<int> dims) {
        for (int d : dims) {
            if (d < 0) throw std::invalid_argument("sphere dimension must be >= 0");
        }
        HomotopyType t;
        t.dims_ = std::move(dims);
        std::sort(t.dims_.begin(), t.dims_.end());
        return t;
    }

    [[nodiscard]] bool is_zero() const noexcept { return dims_.empty(); }
    [[nodiscard]] const std::vector<int>& sphere_dims() const noexcept { return dims_; }

    /// One-point union.  Zero is the neutral element.
    [[nodiscard]] HomotopyType wedge(const HomotopyType& other) const {
        HomotopyType t;
        t.dims_ = dims_;
        t.dims_.insert(t.dims_.end(), other.dims_.begin(), other.dims_.end());
        std::sort(t.dims_.begin(), t.dims_.end());
        return t;
    }

    /// Smash product.  Zero annihilates; on spheres it adds dimensions and
    /// distributes over wedges.
    [[nodiscard]] HomotopyType smash(const HomotopyType& other) const {
        HomotopyType t;
        if (is_zero() || other.is_zero()) return t;
        t.dims_.reserve(dims_.size() * other.dims_.size());
        for (int a : dims_) {
            for (int b : other.dims_) t.dims_.push_back(a + b);
        }
        std::sort(t.dims_.begin(), t.dims_.end());
        return t;
    }

    [[nodiscard]] bool operator==(const HomotopyType& other) const noexcept {
        return dims_ == other.dims_;
    }
    [[nodiscard]] bool operator!=(const HomotopyType& other) const noexcept {
        return !(*this == other);
    }

    [[nodiscard]] std::string to_string() const {
        if (dims_.empty()) return "0";
        std::string s;
        for (std::size_t i = 0; i < dims_.size(); ++i) {
            if (i > 0) s += " v ";
            s += "Sigma^" + std::to_string(dims_[i]);
        }
        return s;
    }

private:
    std::vector<int> dims_;
};

[[nodiscard]] inline HomotopyType wedge(const HomotopyType& a, const HomotopyType& b) {
    return a.wedge(b);
}

[[nodiscard]] inline HomotopyType smash(const HomotopyType& a, const HomotopyType& b) {
    return a.smash(b);
}

}  // namespace resonance
