#pragma once

// Exact cyclotomic multiple harmonic sums, non-vanishing certificates and related checks.

#include "mhs/certifiers.hpp"
#include "mhs/cyclotomic.hpp"
#include "mhs/harmonic.hpp"
#include "mhs/index_text.hpp"
#include "mhs/number_theory.hpp"
#include "mhs/relations.hpp"
#include "mhs/scan.hpp"
