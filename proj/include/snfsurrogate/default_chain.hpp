/**
 * @file default_chain.hpp
 * @brief Embedded copy of data/nuclide_chain.txt (kept identical by a unit test).
 */
#pragma once

#include <string_view>

namespace snf::oracle {

inline constexpr std::string_view kDefaultChainText = R"CHAIN(format snf-chain 1
# Reduced PWR UO2 depletion chain.
#
# Half-lives and decay Q-values are rounded evaluated values. Heat per decay is
# the recoverable energy in MeV; short-lived daughters in secular equilibrium
# (Y-90, Ba-137m, Rh-106, Pr-144, Pa-233) are folded into their parents.
# One-group cross sections are effective thermal-reactor values in barns and
# are not traceable to an evaluated library. temp_coeff / boron_coeff give the
# linear sensitivity of each cross section to relative changes in fuel
# temperature and soluble boron around the reference values below.
version 2026.1
energy_per_fission_MeV 200
reference_fuel_temp_K 887
reference_boron_ppm 310
sink SINK

#       name    mass_amu  half_life unit heat_MeV
nuclide U233    233.0396  1.592e5   y    4.909
nuclide U234    234.0410  2.455e5   y    4.858
nuclide U235    235.0439  7.04e8    y    4.678
nuclide U236    236.0456  2.342e7   y    4.573
nuclide U237    237.0487  6.75      d    0.330
nuclide U238    238.0508  4.468e9   y    4.270
nuclide Np237   237.0482  2.144e6   y    5.200
nuclide Np238   238.0509  2.117     d    0.750
nuclide Np239   239.0529  2.356     d    0.400
nuclide Pu236   236.0461  2.858     y    5.867
nuclide Pu238   238.0496  87.7      y    5.593
nuclide Pu239   239.0522  24110     y    5.245
nuclide Pu240   240.0538  6561      y    5.256
nuclide Pu241   241.0568  14.29     y    0.0052
nuclide Pu242   242.0587  3.75e5    y    4.984
nuclide Am241   241.0568  432.2     y    5.638
nuclide Am242   242.0595  16.02     h    0.180
nuclide Am242m  242.0595  141       y    0.050
nuclide Am243   243.0614  7370      y    5.439
nuclide Cm242   242.0588  162.8     d    6.216
nuclide Cm243   243.0614  29.1      y    6.169
nuclide Cm244   244.0627  18.1      y    5.902
nuclide Cm245   245.0655  8423      y    5.624
nuclide Cm246   246.0672  4706      y    5.475
nuclide Cm247   247.0704  1.56e7    y    5.350
nuclide Cm248   248.0723  3.48e5    y    5.160
nuclide Sr90    89.9077   28.79     y    1.129
nuclide Cs137   136.9071  30.08     y    0.813
nuclide Cs133   132.9055  stable
nuclide Cs134   133.9067  2.0652    y    1.716
nuclide Kr85    84.9125   10.739    y    0.253
nuclide Ru106   105.9073  371.8     d    1.450
nuclide Ce144   143.9137  284.91    d    1.270
nuclide Eu153   152.9212  stable
nuclide Eu154   153.9230  8.601     y    1.530
nuclide SINK    0         stable

#     parent  daughter branching
decay U233    SINK     1
decay U234    SINK     1
decay U235    SINK     1
decay U236    SINK     1
decay U237    Np237    1
decay U238    SINK     1
decay Np237   U233     1
decay Np238   Pu238    1
decay Np239   Pu239    1
decay Pu236   SINK     1
decay Pu238   U234     1
decay Pu239   U235     1
decay Pu240   U236     1
decay Pu241   Am241    1
decay Pu242   U238     1
decay Am241   Np237    1
decay Am242   Cm242    0.827
decay Am242   Pu242    0.173
decay Am242m  Am242    0.9955
decay Am242m  Np238    0.0045
decay Am243   Np239    1
decay Cm242   Pu238    1
decay Cm243   Pu239    0.9971
decay Cm243   Am243    0.0029
decay Cm244   Pu240    1
decay Cm245   Pu241    1
decay Cm246   Pu242    1
decay Cm247   Am243    1
decay Cm248   SINK     1
decay Sr90    SINK     1
decay Cs137   SINK     1
decay Cs134   SINK     1
decay Kr85    SINK     1
decay Ru106   SINK     1
decay Ce144   SINK     1
decay Eu154   SINK     1

#        parent  kind     sigma_b temp   boron  products | yield set
reaction U233    fission  45      0      -0.02  u235
reaction U233    capture  5       0      -0.02  U234:1
reaction U234    capture  20      0.05   0.02   U235:1
reaction U235    fission  40      0      -0.03  u235
reaction U235    capture  10      0.02   -0.01  U236:1
reaction U236    capture  6       0.08   0.03   U237:1
reaction U238    capture  0.9     0.15   0.05   Np239:1
reaction U238    fission  0.08    0      0.02   u235
reaction U238    n2n      0.006   0      0.01   U237:1
reaction Np237   capture  30      0.05   0.02   Np238:1
reaction Np237   n2n      0.002   0      0.01   Pu236:1
reaction Np238   fission  100     0      -0.02  pu239
reaction Pu238   capture  25      0.04   0.01   Pu239:1
reaction Pu238   fission  2.5     0      0      pu239
reaction Pu239   fission  100     0      -0.02  pu239
reaction Pu239   capture  55      0.03   0      Pu240:1
reaction Pu240   capture  100     0.10   0.04   Pu241:1
reaction Pu241   fission  110     0      -0.02  pu239
reaction Pu241   capture  40      0.02   0      Pu242:1
reaction Pu242   capture  25      0.08   0.03   Am243:1
reaction Am241   capture  80      0.03   0.01   Am242:0.9,Am242m:0.1
reaction Am242m  fission  600     0      -0.02  pu239
reaction Am242m  capture  150     0      0      Am243:1
reaction Am243   capture  40      0.06   0.02   Cm244:1
reaction Cm242   capture  5       0      0      Cm243:1
reaction Cm243   fission  80      0      -0.02  pu239
reaction Cm243   capture  10      0      0      Cm244:1
reaction Cm244   capture  12      0.04   0.02   Cm245:1
reaction Cm244   fission  1       0      0      pu239
reaction Cm245   fission  150     0      -0.02  pu239
reaction Cm245   capture  25      0      0      Cm246:1
reaction Cm246   capture  1.5     0.04   0.02   Cm247:1
reaction Cm247   fission  20      0      -0.02  pu239
reaction Cm247   capture  10      0      0      Cm248:1
reaction Cm248   capture  1       0      0      SINK:1
reaction Cs133   capture  6       0.02   0.01   Cs134:1
reaction Cs134   capture  10      0      0      SINK:1
reaction Eu153   capture  40      0.03   0.01   Eu154:1
reaction Eu154   capture  200     0      0      SINK:1

# Cumulative yields per fission; the remainder up to 2 goes to SINK.
yield u235   Sr90   0.0578
yield u235   Cs137  0.0619
yield u235   Cs133  0.0670
yield u235   Kr85   0.0029
yield u235   Ru106  0.0040
yield u235   Ce144  0.0550
yield u235   Eu153  0.0016
yield pu239  Sr90   0.0210
yield pu239  Cs137  0.0661
yield pu239  Cs133  0.0702
yield pu239  Kr85   0.0013
yield pu239  Ru106  0.0435
yield pu239  Ce144  0.0374
yield pu239  Eu153  0.0037
)CHAIN";

}  // namespace snf::oracle
