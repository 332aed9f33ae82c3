#pragma once

#include <string>

namespace tailrisk {

// phi-divergence generator with closed-form conjugate, second derivative and
// upper-branch inverse. phi(1) = phi'(1) = 0 and phi is convex on [0, inf)
// for every family. Conjugates are taken over the primal domain t >= 0
// (likelihood ratios), which flattens phi* on the far-left branch:
//   ChiSquare:   phi*(s) = s + s^2/2 for s >= -1, -1/2 below
//   CressieRead: phi*(s) = ((1+(p-1)s)^{p/(p-1)} - 1)/p for s >= -1/(p-1),
//                -1/p below
//   KL:          phi*(s) = e^s - 1
//   ExpShifted:  phi*(s) = (1+s) ln(1+s) for s > -1, +inf otherwise
// ExpShifted keeps the +inf branch: its conjugate enforces its own domain
// inside dual objectives.
class PhiSpec {
  public:
    enum class Family { ChiSquare, KL, CressieRead, ExpShifted };

    // Growth class of phi at infinity: polynomial regular variation with
    // index p, or super-polynomial (log o phi regularly varying).
    struct GrowthClass {
        bool super_polynomial;
        double p;  // RV index of phi (polynomial) or of log o phi
    };

    static PhiSpec chi_square();
    static PhiSpec kl();
    static PhiSpec cressie_read(double p);
    static PhiSpec exp_shifted();

    double phi(double t) const;
    double conjugate(double s) const;
    double second_derivative(double t) const;

    /// Inverse of phi restricted to [1, inf): the unique t >= 1 with
    /// phi(t) = y. Newton with bisection fallback, tolerance 1e-12 relative.
    double inverse_upper(double y) const;

    GrowthClass growth_class() const;
    Family family() const { return family_; }
    double cressie_read_p() const { return p_; }
    std::string name() const;

  private:
    PhiSpec(Family f, double p) : family_(f), p_(p) {}
    Family family_;
    double p_;
};

double phi(const PhiSpec& spec, double t);
double phi_conjugate(const PhiSpec& spec, double s);
double phi_second(const PhiSpec& spec, double t);
double phi_inverse_upper(const PhiSpec& spec, double y);

}  // namespace tailrisk
