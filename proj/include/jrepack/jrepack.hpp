#ifndef JREPACK_JREPACK_HPP
#define JREPACK_JREPACK_HPP

#include "jrepack/coders/range_coder.hpp"
#include "jrepack/coders/rlgr.hpp"
#include "jrepack/coeff/buckets.hpp"
#include "jrepack/coeff/zigzag.hpp"
#include "jrepack/common.hpp"
#include "jrepack/container/codec.hpp"
#include "jrepack/container/format.hpp"
#include "jrepack/jpeg/decoder.hpp"
#include "jrepack/jpeg/encoder.hpp"
#include "jrepack/jpeg/types.hpp"
#include "jrepack/model/laplace.hpp"
#include "jrepack/model/tables.hpp"
#include "jrepack/predict/params.hpp"
#include "jrepack/predict/predictor.hpp"
#include "jrepack/stats/process_sim.hpp"
#include "jrepack/stats/reports.hpp"
#include "jrepack/stats/rng.hpp"

#endif
