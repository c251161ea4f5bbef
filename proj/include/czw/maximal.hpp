#pragma once

#include <cstddef>

#include "czw/grid.hpp"
#include "czw/mode.hpp"

namespace czw {

// Hardy-Littlewood maximal function: sup over intervals containing x of avg |f|.
GridFunction hl_maximal(const GridFunction& f, IntervalMode mode);

// M_eps f = M(|f|^eps)^(1/eps).
GridFunction power_maximal(const GridFunction& f, double eps, IntervalMode mode);

// M^# f(x) = sup over intervals containing x of avg |f - f_Q|.
GridFunction sharp_maximal(const GridFunction& f, IntervalMode mode);

// M^#_delta f = M^#(|f|^delta)^(1/delta), delta in (0, 1].
GridFunction sharp_power(const GridFunction& f, double delta, IntervalMode mode);

// M_{L^r} f, the L^r-average maximal function (r >= 1).
GridFunction lr_maximal(const GridFunction& f, double r, IntervalMode mode);

struct RatioReport {
    double worst_ratio = 0.0;
    std::size_t worst_cell = 0;
    double lhs_at_worst = 0.0;
    double rhs_at_worst = 0.0;
};

/// Pointwise comparison M_{L(log L)^{1+eps}} w <= alpha^{-(1+eps)} M_{L^{1+alpha(1+eps)}} w;
/// reports the largest lhs/rhs over cells.
RatioReport check_loglog_vs_lr(const GridFunction& w, double eps, double alpha, IntervalMode mode);

}  // namespace czw
