#pragma once

#include "bsnet/network.hpp"

namespace bsnet {

enum class MapKind { truncated, arctan };

/// Treatment of the semi-infinite price axis. Solver coordinates are S itself
/// for the truncated kind and x = (2/pi) atan(S/L) in [0, 1) for the arctan kind.
struct DomainMap {
    MapKind kind = MapKind::truncated;
    double s_max = 15.0;     // truncated only
    double L = 1.0;          // arctan only, characteristic length
    double l = 0.6;          // arctan only, strike quantile
    double right_eval_point = 0.9999999;  // arctan stand-in for x = 1

    static DomainMap truncated(double s_max);
    static DomainMap arctan(double L, double right_eval_point = 0.9999999);
};

/// dS/dx and d(dS/dx)^{-1}/dx at a solver coordinate.
struct MapJacobians {
    double upsilon = 1.0;
    double theta = 0.0;
};

/// Arctan map whose characteristic length sends the strike K to x = l.
DomainMap make_arctan_map(double K, double l = 0.6);

double to_x(const DomainMap& map, double S);
double from_x(const DomainMap& map, double x);
MapJacobians jacobians(const DomainMap& map, double x);

/// Convert solver-coordinate derivatives of a network into S-space derivatives.
NetEval transform_derivatives(const NetEval& eval, const MapJacobians& jac);

/// Lower and upper solver coordinate of the training domain.
double solver_lo(const DomainMap& map, double domain_lo);
double solver_hi(const DomainMap& map, double domain_hi);

} // namespace bsnet
