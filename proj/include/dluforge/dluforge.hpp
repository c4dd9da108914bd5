#pragma once

// Everything, for tools and tests that want one include.

#include "dluforge/activation.hpp"
#include "dluforge/approx/bernstein.hpp"
#include "dluforge/approx/exp_abs.hpp"
#include "dluforge/approx/expansion.hpp"
#include "dluforge/approx/piecewise.hpp"
#include "dluforge/approx/rank_one.hpp"
#include "dluforge/approx/rational_fit.hpp"
#include "dluforge/circuit.hpp"
#include "dluforge/error.hpp"
#include "dluforge/gadgets.hpp"
#include "dluforge/gates.hpp"
#include "dluforge/monomial.hpp"
#include "dluforge/network.hpp"
#include "dluforge/poly_compiler.hpp"
#include "dluforge/recurrence.hpp"
#include "dluforge/relu/breakpoints.hpp"
#include "dluforge/relu/lower_bound.hpp"
#include "dluforge/relu/yarotsky.hpp"
#include "dluforge/serialize.hpp"
#include "dluforge/target.hpp"
#include "dluforge/verify/families.hpp"
#include "dluforge/verify/measure.hpp"
#include "dluforge/verify/report.hpp"
#include "dluforge/verify/sweep.hpp"
