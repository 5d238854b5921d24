#pragma once

#include "radix_approx/errors.hpp"
#include "radix_approx/exact.hpp"
#include "radix_approx/digitsets.hpp"
#include "radix_approx/approx.hpp"
#include "radix_approx/diffsets.hpp"
#include "radix_approx/expsum.hpp"
#include "radix_approx/discrepancy.hpp"
#include "radix_approx/constants.hpp"
#include "radix_approx/adversary.hpp"
