#ifndef JENSEN_JENSEN_HPP
#define JENSEN_JENSEN_HPP

#include "jensen/bounds.hpp"
#include "jensen/coefficients.hpp"
#include "jensen/diagnostics.hpp"
#include "jensen/distributions.hpp"
#include "jensen/error.hpp"
#include "jensen/gallery.hpp"
#include "jensen/latent_model.hpp"
#include "jensen/pac_bayes.hpp"
#include "jensen/quadrature.hpp"
#include "jensen/random.hpp"
#include "jensen/special_functions.hpp"
#include "jensen/summation.hpp"
#include "jensen/tightening.hpp"

#endif  // JENSEN_JENSEN_HPP
