#ifndef BDWB_BDWB_HPP
#define BDWB_BDWB_HPP

#include <bdwb/fdd.hpp>
#include <bdwb/lp_norms.hpp>
#include <bdwb/matrix.hpp>
#include <bdwb/net.hpp>
#include <bdwb/params.hpp>
#include <bdwb/rational.hpp>
#include <bdwb/report.hpp>
#include <bdwb/ris.hpp>
#include <bdwb/serialize.hpp>
#include <bdwb/simplex.hpp>
#include <bdwb/space.hpp>
#include <bdwb/sparse.hpp>
#include <bdwb/suites.hpp>
#include <bdwb/symbolic_op.hpp>
#include <bdwb/t2.hpp>

#endif  // BDWB_BDWB_HPP
