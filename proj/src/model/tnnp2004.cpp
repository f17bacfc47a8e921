// Copyright 2026 The gatenet Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>

#include "gatenet/error.hpp"
#include "gatenet/model/models.hpp"

namespace gatenet::model {

namespace {

enum : std::size_t {
  kV, kCai, kCaSR, kNai, kKi,
  kM, kH, kJ, kD, kF, kFCa, kXr1, kXr2, kXs, kR, kS, kG,
  kStateSize
};

enum : std::size_t {
  iNa, iCaL, iKr, iKs, iK1, iTo, iRel, iNaCa, iNaK, iPCa, iPK, iBNa, iBCa,
  iUp, iLeak
};

struct Constants {
  double R = 8314.472;   // J/(K kmol)
  double T = 310.0;      // K
  double F = 96485.3415; // C/mol
  double Cm = 0.185;     // uF
  double Vc = 0.016404;  // um^3
  double Vsr = 0.001094; // um^3
  double Ko = 5.4;
  double Nao = 140.0;
  double Cao = 2.0;

  double GNa = 14.838;
  double GK1 = 5.405;
  double Gto = 0.294;
  double GKr = 0.096;
  double GKs = 0.245;
  double pKNa = 0.03;
  double GCaL = 1.75e-4;
  double kNaCa = 1000.0;
  double KmNai = 87.5;
  double KmCa = 1.38;
  double ksat = 0.1;
  double gamma = 0.35;
  double alpha = 2.5;
  double PNaK = 1.362;
  double KmK = 1.0;
  double KmNa = 40.0;
  double GpK = 0.0146;
  double GpCa = 0.825;
  double KpCa = 0.0005;
  double GbNa = 0.00029;
  double GbCa = 0.000592;
  double Vmaxup = 0.000425;
  double Kup = 0.00025;
  double arel = 0.016464;
  double brel = 0.25;
  double crel = 0.008232;
  double Vleak = 0.00008;
  double Bufc = 0.15;
  double Kbufc = 0.001;
  double Bufsr = 10.0;
  double Kbufsr = 0.3;

  double rtf() const { return R * T / F; }
};

double sigmoid_exp(double x) { return 1.0 / (1.0 + std::exp(x)); }

}  // namespace

TnnpVariant parse_tnnp_variant(std::string_view name) {
  if (name == "epi" || name == "epicardial") return TnnpVariant::kEpicardial;
  if (name == "endo" || name == "endocardial") return TnnpVariant::kEndocardial;
  if (name == "mcell" || name == "m" || name == "M") return TnnpVariant::kMCell;
  throw UsageError("unknown cell variant " + std::string(name));
}

std::string_view variant_name(TnnpVariant variant) {
  switch (variant) {
    case TnnpVariant::kEpicardial: return "epi";
    case TnnpVariant::kEndocardial: return "endo";
    case TnnpVariant::kMCell: return "mcell";
  }
  return "epi";
}

IonicModel tnnp2004(TnnpVariant variant) {
  Constants c;
  if (variant == TnnpVariant::kEndocardial) c.Gto = 0.073;
  if (variant == TnnpVariant::kMCell) c.GKs = 0.062;
  const double rtf = c.rtf();

  using K = VariableKind;
  IonicModel::Definition def;
  def.key = "tnnp2004";
  def.layout = StateLayout(
      {"V", "Ca_i", "Ca_SR", "Na_i", "K_i", "m", "h", "j", "d", "f", "fCa",
       "xr1", "xr2", "xs", "r", "s", "g"},
      {K::kVoltage, K::kConcentration, K::kConcentration, K::kConcentration,
       K::kConcentration, K::kClassicGate, K::kClassicGate, K::kClassicGate,
       K::kClassicGate, K::kClassicGate, K::kAtypicalGate, K::kClassicGate,
       K::kClassicGate, K::kClassicGate, K::kClassicGate, K::kClassicGate,
       K::kAtypicalGate});
  def.partition.observables = {kV, kCai};
  def.partition.gnn_gates = {kM, kH, kJ, kD, kF, kXr1, kXr2, kXs, kR, kS};
  def.partition.lstm_vars = {kV, kCai, kCaSR, kNai, kKi, kFCa, kG};

  auto ss = [](auto inf, auto tau) { return GateSpec::from_steady_state(inf, tau); };

  def.gates.push_back({kM, ss(
      [](double v) { const double s = sigmoid_exp((-56.86 - v) / 9.03); return s * s; },
      [](double v) {
        const double a = sigmoid_exp((-60.0 - v) / 5.0);
        const double b = 0.1 * sigmoid_exp((v + 35.0) / 5.0) +
                         0.1 * sigmoid_exp((v - 50.0) / 200.0);
        return a * b;
      })});
  auto h_inf = [](double v) { const double s = sigmoid_exp((v + 71.55) / 7.43); return s * s; };
  def.gates.push_back({kH, ss(h_inf, [](double v) {
    double a, b;
    if (v >= -40.0) {
      a = 0.0;
      b = 0.77 / (0.13 * (1.0 + std::exp(-(v + 10.66) / 11.1)));
    } else {
      a = 0.057 * std::exp(-(v + 80.0) / 6.8);
      b = 2.7 * std::exp(0.079 * v) + 3.1e5 * std::exp(0.3485 * v);
    }
    return 1.0 / (a + b);
  })});
  def.gates.push_back({kJ, ss(h_inf, [](double v) {
    double a, b;
    if (v >= -40.0) {
      a = 0.0;
      b = 0.6 * std::exp(0.057 * v) / (1.0 + std::exp(-0.1 * (v + 32.0)));
    } else {
      a = (-2.5428e4 * std::exp(0.2444 * v) - 6.948e-6 * std::exp(-0.04391 * v)) *
          (v + 37.78) / (1.0 + std::exp(0.311 * (v + 79.23)));
      b = 0.02424 * std::exp(-0.01052 * v) / (1.0 + std::exp(-0.1378 * (v + 40.14)));
    }
    return 1.0 / (a + b);
  })});
  def.gates.push_back({kD, ss(
      [](double v) { return sigmoid_exp((-5.0 - v) / 7.5); },
      [](double v) {
        const double a = 1.4 * sigmoid_exp((-35.0 - v) / 13.0) + 0.25;
        const double b = 1.4 * sigmoid_exp((v + 5.0) / 5.0);
        const double g = sigmoid_exp((50.0 - v) / 20.0);
        return a * b + g;
      })});
  def.gates.push_back({kF, ss(
      [](double v) { return sigmoid_exp((v + 20.0) / 7.0); },
      [](double v) {
        return 1125.0 * std::exp(-(v + 27.0) * (v + 27.0) / 240.0) + 80.0 +
               165.0 * sigmoid_exp((25.0 - v) / 10.0);
      })});
  def.gates.push_back({kXr1, ss(
      [](double v) { return sigmoid_exp((-26.0 - v) / 7.0); },
      [](double v) {
        return 450.0 * sigmoid_exp((-45.0 - v) / 10.0) * 6.0 * sigmoid_exp((v + 30.0) / 11.5);
      })});
  def.gates.push_back({kXr2, ss(
      [](double v) { return sigmoid_exp((v + 88.0) / 24.0); },
      [](double v) {
        return 3.0 * sigmoid_exp((-60.0 - v) / 20.0) * 1.12 * sigmoid_exp((v - 60.0) / 20.0);
      })});
  def.gates.push_back({kXs, ss(
      [](double v) { return sigmoid_exp((-5.0 - v) / 14.0); },
      [](double v) {
        return 1100.0 / std::sqrt(1.0 + std::exp((-10.0 - v) / 6.0)) *
               sigmoid_exp((v - 60.0) / 20.0);
      })});
  def.gates.push_back({kR, ss(
      [](double v) { return sigmoid_exp((20.0 - v) / 6.0); },
      [](double v) { return 9.5 * std::exp(-(v + 40.0) * (v + 40.0) / 1800.0) + 0.8; })});
  if (variant == TnnpVariant::kEndocardial) {
    def.gates.push_back({kS, ss(
        [](double v) { return sigmoid_exp((v + 28.0) / 5.0); },
        [](double v) { return 1000.0 * std::exp(-(v + 67.0) * (v + 67.0) / 1000.0) + 8.0; })});
  } else {
    def.gates.push_back({kS, ss(
        [](double v) { return sigmoid_exp((v + 20.0) / 5.0); },
        [](double v) {
          return 85.0 * std::exp(-(v + 45.0) * (v + 45.0) / 320.0) +
                 5.0 * sigmoid_exp((v - 20.0) / 5.0) + 3.0;
        })});
  }

  auto e_k = [c, rtf](std::span<const double> u) { return rtf * std::log(c.Ko / u[kKi]); };
  auto e_na = [c, rtf](std::span<const double> u) { return rtf * std::log(c.Nao / u[kNai]); };
  auto e_ca = [c, rtf](std::span<const double> u) {
    return 0.5 * rtf * std::log(c.Cao / u[kCai]);
  };
  auto e_ks = [c, rtf](std::span<const double> u) {
    return rtf * std::log((c.Ko + c.pKNa * c.Nao) / (u[kKi] + c.pKNa * u[kNai]));
  };
  const double sqrt_ko = std::sqrt(c.Ko / 5.4);

  auto& cur = def.currents;
  cur.push_back({"I_Na", 1.0, true, [c, e_na](std::span<const double> u) {
    const double m = u[kM];
    return c.GNa * m * m * m * u[kH] * u[kJ] * (u[kV] - e_na(u));
  }});
  cur.push_back({"I_CaL", 1.0, true, [c, rtf](std::span<const double> u) {
    // 4 V F^2/(RT) (Ca_i e^x - 0.341 Ca_o)/(e^x - 1) with x = 2 V F/(RT)
    // rewritten as 2 F (...) x/(e^x - 1) to remove the singularity at V = 0.
    const double x = 2.0 * u[kV] / rtf;
    const double ratio = std::abs(x) < 1e-9 ? 1.0 - 0.5 * x : x / std::expm1(x);
    return c.GCaL * u[kD] * u[kF] * u[kFCa] * 2.0 * c.F *
           (u[kCai] * std::exp(x) - 0.341 * c.Cao) * ratio;
  }});
  cur.push_back({"I_Kr", 1.0, true, [c, e_k, sqrt_ko](std::span<const double> u) {
    return c.GKr * sqrt_ko * u[kXr1] * u[kXr2] * (u[kV] - e_k(u));
  }});
  cur.push_back({"I_Ks", 1.0, true, [c, e_ks](std::span<const double> u) {
    return c.GKs * u[kXs] * u[kXs] * (u[kV] - e_ks(u));
  }});
  cur.push_back({"I_K1", 1.0, true, [c, e_k, sqrt_ko](std::span<const double> u) {
    const double ek = e_k(u);
    const double dv = u[kV] - ek;
    const double a = 0.1 / (1.0 + std::exp(0.06 * (dv - 200.0)));
    const double b = (3.0 * std::exp(0.0002 * (dv + 100.0)) + std::exp(0.1 * (dv - 10.0))) /
                     (1.0 + std::exp(-0.5 * dv));
    return c.GK1 * sqrt_ko * a / (a + b) * dv;
  }});
  cur.push_back({"I_to", 1.0, true, [c, e_k](std::span<const double> u) {
    return c.Gto * u[kR] * u[kS] * (u[kV] - e_k(u));
  }});
  cur.push_back({"I_rel", 1.0, false, [c](std::span<const double> u) {
    const double sr2 = u[kCaSR] * u[kCaSR];
    return (c.arel * sr2 / (c.brel * c.brel + sr2) + c.crel) * u[kD] * u[kG];
  }});
  cur.push_back({"I_NaCa", 1.0, true, [c, rtf](std::span<const double> u) {
    const double v = u[kV];
    const double up = std::exp(c.gamma * v / rtf);
    const double down = std::exp((c.gamma - 1.0) * v / rtf);
    const double nai3 = u[kNai] * u[kNai] * u[kNai];
    const double nao3 = c.Nao * c.Nao * c.Nao;
    return c.kNaCa * (up * nai3 * c.Cao - down * nao3 * u[kCai] * c.alpha) /
           ((c.KmNai * c.KmNai * c.KmNai + nao3) * (c.KmCa + c.Cao) * (1.0 + c.ksat * down));
  }});
  cur.push_back({"I_NaK", 1.0, true, [c, rtf](std::span<const double> u) {
    const double v = u[kV];
    return c.PNaK * c.Ko / (c.Ko + c.KmK) * u[kNai] / (u[kNai] + c.KmNa) /
           (1.0 + 0.1245 * std::exp(-0.1 * v / rtf) + 0.0353 * std::exp(-v / rtf));
  }});
  cur.push_back({"I_pCa", 1.0, true, [c](std::span<const double> u) {
    return c.GpCa * u[kCai] / (c.KpCa + u[kCai]);
  }});
  cur.push_back({"I_pK", 1.0, true, [c, e_k](std::span<const double> u) {
    return c.GpK * (u[kV] - e_k(u)) / (1.0 + std::exp((25.0 - u[kV]) / 5.98));
  }});
  cur.push_back({"I_bNa", 1.0, true, [c, e_na](std::span<const double> u) {
    return c.GbNa * (u[kV] - e_na(u));
  }});
  cur.push_back({"I_bCa", 1.0, true, [c, e_ca](std::span<const double> u) {
    return c.GbCa * (u[kV] - e_ca(u));
  }});
  cur.push_back({"I_up", 1.0, false, [c](std::span<const double> u) {
    const double r = c.Kup / u[kCai];
    return c.Vmaxup / (1.0 + r * r);
  }});
  cur.push_back({"I_leak", 1.0, false, [c](std::span<const double> u) {
    return c.Vleak * (u[kCaSR] - u[kCai]);
  }});

  def.auxiliary = [c](std::span<const double> u, std::span<const double> i, double stim,
                      std::span<double> du) {
    const double cm_vcf = c.Cm / (c.Vc * c.F);
    const double cai = u[kCai];
    const double bufc = 1.0 / (1.0 + c.Bufc * c.Kbufc / ((cai + c.Kbufc) * (cai + c.Kbufc)));
    const double casr = u[kCaSR];
    const double bufsr =
        1.0 / (1.0 + c.Bufsr * c.Kbufsr / ((casr + c.Kbufsr) * (casr + c.Kbufsr)));
    du[kCai] = bufc * (i[iLeak] - i[iUp] + i[iRel] -
                       (i[iCaL] + i[iBCa] + i[iPCa] - 2.0 * i[iNaCa]) * 0.5 * cm_vcf);
    du[kCaSR] = bufsr * c.Vc / c.Vsr * (i[iUp] - (i[iRel] + i[iLeak]));
    du[kNai] = -(i[iNa] + i[iBNa] + 3.0 * i[iNaK] + 3.0 * i[iNaCa]) * cm_vcf;
    du[kKi] = -(i[iK1] + i[iTo] + i[iKr] + i[iKs] + i[iPK] + stim - 2.0 * i[iNaK]) * cm_vcf;

    const double v = u[kV];
    const double a_fca = 1.0 / (1.0 + std::pow(cai / 0.000325, 8));
    const double b_fca = 0.1 / (1.0 + std::exp((cai - 0.0005) / 0.0001));
    const double g_fca = 0.2 / (1.0 + std::exp((cai - 0.00075) / 0.0008));
    const double fca_inf = (a_fca + b_fca + g_fca + 0.23) / 1.46;
    const double dfca = (fca_inf - u[kFCa]) / 2.0;
    du[kFCa] = (fca_inf > u[kFCa] && v > -60.0) ? 0.0 : dfca;

    const double ratio = cai / 0.00035;
    const double g_inf = cai < 0.00035 ? 1.0 / (1.0 + std::pow(ratio, 6))
                                       : 1.0 / (1.0 + std::pow(ratio, 16));
    const double dg = (g_inf - u[kG]) / 2.0;
    du[kG] = (g_inf > u[kG] && v > -60.0) ? 0.0 : dg;
  };

  // Currents are densities (pA/pF), so the voltage equation uses unit
  // specific capacitance; c.Cm only enters the concentration balances.
  def.capacitance = 1.0;
  def.voltage_sign = -1.0;
  def.initial_state = {-86.2, 0.0002, 0.2, 11.6, 138.3, 0.0, 0.75, 0.75, 0.0,
                       1.0,   1.0,    0.0, 1.0,  0.0,   0.0, 1.0,  1.0};
  return IonicModel(std::move(def));
}

}  // namespace gatenet::model
