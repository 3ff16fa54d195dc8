"""Published reference values used for the diff columns of ``hadvp table``.

Values are kept as strings in the bracket notation ``-1.396(17)[-11]``:
mantissa, uncertainty in the last digits, and the power of ten.  Lamb
shift totals carry two uncertainties and are shown for comparison only.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

_BRACKET = re.compile(
    r"^\s*(?P<m>[+-]?\d+(?:\.(?P<frac>\d+))?)\s*"
    r"(?P<u>(?:\(\d+\))*)\s*(?:\[(?P<e>[+-]?\d+)\])?\s*$")


@dataclass(frozen=True)
class Quoted:
    value: float
    uncertainty: float
    text: str


def parse_bracket(text: str) -> Quoted:
    """Parse '-1.396(17)[-11]'; several parenthesized errors add in quadrature."""
    t = text.replace("−", "-").replace(" ", "")
    m = _BRACKET.match(t)
    if not m:
        raise ValueError(f"not a bracket-notation number: '{text}'")
    exp = int(m.group("e") or 0)
    ndig = len(m.group("frac") or "")
    value = float(m.group("m")) * 10.0 ** exp
    errs = [int(u) * 10.0 ** (exp - ndig) for u in re.findall(r"\((\d+)\)", m.group("u"))]
    return Quoted(value, sum(e * e for e in errs) ** 0.5, text)


ZS = (1, 14, 20, 36, 54, 74, 82)

# Z: (R_rms fm, nonrel point, rel point, rel fns, Lamb shift total) for 1s, eV
TABLE_II = {
    1: ("0.8783(86)", "-1.395(17)[-11]", "-1.396(17)[-11]", "-1.396(17)[-11]", "3.3800262(7)(57)[-5]"),
    14: ("3.1224(24)", "-5.361(67)[-7]", "-5.918(73)[-7]", "-5.756(72)[-7]", "4.80447(18)(4)[-1]"),
    20: ("3.4776(19)", "-2.233(28)[-6]", "-2.713(33)[-6]", "-2.560(32)[-6]", "1.63263(6)(2)[0]"),
    36: ("4.1884(22)", "-2.344(29)[-5]", "-4.270(50)[-5]", "-3.485(43)[-5]", "1.18259(16)(3)[1]"),
    54: ("4.7859(48)", "-1.187(15)[-4]", "-4.445(48)[-4]", "-2.706(34)[-4]", "4.6920(18)(6)[1]"),
    74: ("5.3658(23)", "-4.184(52)[-4]", "-5.098(46)[-3]", "-1.801(22)[-3]", "1.5422(13)(2)[2]"),
    82: ("5.5012(13)", "-6.309(79)[-4]", "-1.413(11)[-2]", "-3.693(46)[-3]", "2.4440(26)(3)[2]"),
}
TABLE_II_COLUMNS = ("r_rms_fm", "nonrel-point", "rel-point-analytic", "rel-fns-approx", "lamb_shift")

# Z: (2s fns, 2s LS, 2p1/2 fns, 2p1/2 LS, 2p3/2 fns, 2p3/2 LS), eV
TABLE_III = {
    1: ("-1.745(22)[-12]", "4.3218005(8)(72)[-6]", "-1.743(22)[-17]", "-5.30919(4)(0)[-8]",
        "-6.427(80)[-23]", "5.177459[-8]"),
    14: ("-7.262(91)[-8]", "6.40329(23)(5)[-2]", "-1.431(19)[-10]", "-1.7316(4)(0)[-3]",
         "-4.168(52)[-15]", "2.1808(4)(0)[-3]"),
    20: ("-3.260(41)[-7]", "2.21409(9)(2)[-1]", "-1.321(17)[-9]", "-6.2940(35)(0)[-3]",
         "-4.535(57)[-14]", "9.6566(34)(0)[-3]"),
    36: ("-4.631(58)[-6]", "1.68814(25)(4)[0]", "-6.261(78)[-8]", "-3.4426(62)(1)[-2]",
         "-2.602(33)[-12]", "1.2089(9)(0)[-1]"),
    54: ("-3.887(49)[-5]", "7.1723(27)(9)[0]", "-1.251(16)[-6]", "6.0317(72)(36)[-1]",
         "-5.036(63)[-11]", "7.413(10)(0)[-1]"),
    74: ("-2.932(37)[-4]", "2.5876(20)(4)[1]", "-1.957(24)[-5]", "1.6390(33)(3)[0]",
         "-6.217(78)[-10]", "3.1615(30)(0)[0]"),
    82: ("-6.403(80)[-4]", "4.2924(44)(4)[1]", "-5.541(69)[-5]", "3.9045(72)(4)[0]",
         "-1.462(18)[-9]", "5.1088(57)(0)[0]"),
}
TABLE_III_STATES = ("2s", "2p1/2", "2p3/2")

# muonic hydrogen, meV: state -> (nonrel point analytic, rel fns full)
TABLE_IV = {
    "1s": ("-1.234(15)[-1]", "-1.229(15)[-1]"),
    "2s": ("-1.542(19)[-2]", "-1.53(5)[-2]"),
    "2p1/2": ("-1.631(22)[-7]", "-1.8(1)[-7]"),
}

# single reference numbers quoted outside the tables
NONREL_1S_HYDROGEN_EV = "-1.395(17)[-11]"
Z96_1S_EV = -1.2637e-2
Z96_R_RMS_FM = 5.85
FERMI_PB_1S_EV = -3.646e-3
FERMI_SKIN_FM = 2.3
MUONIC_RATIO = "0.6647(81)"


def table_ii(Z: int, column: str) -> Quoted:
    return parse_bracket(TABLE_II[Z][TABLE_II_COLUMNS.index(column)])


def table_iii(Z: int, state: str) -> Quoted:
    return parse_bracket(TABLE_III[Z][2 * TABLE_III_STATES.index(state)])


def table_iii_lamb(Z: int, state: str) -> str:
    return TABLE_III[Z][2 * TABLE_III_STATES.index(state) + 1]


def table_iv(state: str, column: str) -> Quoted:
    return parse_bracket(TABLE_IV[state][("nonrel-point", "rel-fns-full").index(column)])
