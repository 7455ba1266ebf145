#pragma once

namespace spdc {

// Imaginary error function erfi(x) = -i erf(ix) = (2/sqrt(pi)) int_0^x e^{t^2} dt.
// All-positive Maclaurin series for |x| <= 6 (no cancellation), asymptotic
// expansion beyond. Overflows to +/-inf past x ~ 26.6 like e^{x^2} itself.
double erfi(double x);

// Dawson integral D(x) = e^{-x^2} int_0^x e^{t^2} dt. Stable for all x; this
// is the form the Magnus mode functions actually need since their Gaussian
// prefactor cancels most of erfi's growth.
double dawson(double x);

}  // namespace spdc
