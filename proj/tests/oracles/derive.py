#!/usr/bin/env python3
# Copyright 2026 The vecop Authors
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Reference values for the unit tests, computed at 50 digits.

The C++ tests hard-code these numbers; rerun this script to re-derive them.
"""

from mpmath import mp, mpf, log10, sqrt

mp.dps = 50


def fspl(d, f):
    return 20 * log10(mpf(d)) + 20 * log10(mpf(f)) - mpf("147.55")


def watts(dbm):
    return mpf(10) ** (mpf(dbm) / 10) / 1000


diag = sqrt(mpf(40) ** 2 + mpf(40) ** 2)
rows = {
    "lot diagonal (m)": diag,
    "fspl(56.57 m, 5.9 GHz)": fspl("56.57", "5.9e9"),
    "fspl(40 m, 2.4 GHz)": fspl(40, "2.4e9"),
    "fspl(1 m, 1 Hz)": fspl(1, 1),
    "req_tx(56.57, 5.9G, -77)": -77 + fspl("56.57", "5.9e9"),
    "req_tx(1, 5.9G, -77)": -77 + fspl(1, "5.9e9"),
    "req_tx(40, 2.4G, -104)": -104 + fspl(40, "2.4e9"),
    "dbm_to_watts(22)": watts(22),
    "dbm_to_watts(14)": watts(14),
    "fiber 250 km (s)": mpf("250e3") / mpf("2e8"),
    "wifi tx 1500 B (s)": mpf(12000) / mpf("150e6"),
    "wifi prop 40 m (s)": mpf(40) / mpf("3e8"),
    "dsrc mu (pkt/s)": mpf("27e6") / 12000,
    "mm1(1125, 2250) (s)": 1 / (mpf(2250) - 1125),
    "table K=2 L1": 1 * mpf("0.95") * 2250 / 2,
    "table K=2 L2": 2 * mpf("0.95") * 2250 / 2,
    "table K=2 Q1 (s)": 1 / (2250 - mpf("0.95") * 2250 / 2),
    "table K=2 Q2 (s)": 1 / (2250 - mpf("0.95") * 2250),
    "vehicle marginal (W/MIPS)": mpf(5) / 800,
    "pi marginal (W/MIPS)": mpf("10.5") / 1200,
    "obu local 600 MIPS (W)": 5 + 5 * mpf(600) / 800,
    "dsrc J/bit, full load": (mpf(10) - 5) * 2 / mpf("27e6") + watts(22) / mpf("27e6"),
    "wifi J/bit, full load": (mpf("0.612") - mpf("0.000072")) / mpf("150e6")
    + (mpf(25) - mpf("5.5")) / mpf("150e6") + watts(14) / mpf("150e6"),
}
for k, v in rows.items():
    print(f"{k:32s} {mp.nstr(v, 17)}")
