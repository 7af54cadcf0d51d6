#ifndef SHNOL_SHNOL_HPP
#define SHNOL_SHNOL_HPP

#include "shnol/apriori.hpp"
#include "shnol/certificate.hpp"
#include "shnol/classify.hpp"
#include "shnol/coeffs.hpp"
#include "shnol/config.hpp"
#include "shnol/csv.hpp"
#include "shnol/errors.hpp"
#include "shnol/experiment.hpp"
#include "shnol/jacobi_operator.hpp"
#include "shnol/parallel.hpp"
#include "shnol/perturb.hpp"
#include "shnol/recurrence.hpp"
#include "shnol/spectrum.hpp"
#include "shnol/tail.hpp"

#endif  // SHNOL_SHNOL_HPP
