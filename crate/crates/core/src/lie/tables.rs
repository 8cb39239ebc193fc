//! Published coefficient tables of the nested exponents, transcribed verbatim,
//! and their comparison against the derived polynomials.

use super::algebra::Algebra;
use super::bch::expand_scheme;
use super::poly::CoeffPolynomial;

pub struct PrintedCell {
    pub stage: &'static str,
    pub label: &'static str,
    pub printed: &'static str,
}

const V3_WTTTW_TAIL: &str = "c1^3(1/45c0^2 - 7/90c0c2 + 4/45c2^2) + 1/18c1^2c3(c0+2c2)(c0-4c2) \
    + 1/90c1^2c3(c0+2c2)^2 + 1/45c3^3(c0+2c2^2) + 1/15c1c3^2(c0+2c2)^2";

pub const PRINTED: &[PrintedCell] = &[
    PrintedCell { stage: "V2", label: "T", printed: "2c1" },
    PrintedCell { stage: "V2", label: "W", printed: "c0 + 2c2" },
    PrintedCell { stage: "V2", label: "[T,W,T]", printed: "1/6c1^2(c0-4c2)" },
    PrintedCell { stage: "V2", label: "[T,T,T,T,W]", printed: "7/360c0c1^4 - 2/45c1^4c2" },
    PrintedCell {
        stage: "V2",
        label: "[W,T,T,T,W]",
        printed: "1/45c0^2c1^3 - 1/18c0c1^3c2 - 1/45c0c1^3c2 + 4/45c1^3c2^2",
    },
    PrintedCell { stage: "V3", label: "T", printed: "2(c1+c3)" },
    PrintedCell { stage: "V3", label: "W", printed: "c0 + 2c2" },
    PrintedCell {
        stage: "V3",
        label: "[T,W,T]",
        printed: "1/6c1^2(c0-4c2) + 1/3c1c3(c0+2c2) + 1/6c3^2(c0+2c2)",
    },
    PrintedCell {
        stage: "V3",
        label: "[T,T,T,T,W]",
        printed: "c1^4(7/360c0 - 2/45c2) + 1/18c1^3c3(c0-4c2) + 1/36c1^2c3^2(c0-4c2) \
            + 1/45c1^3c3(c0+2c2) + 4/45c1^2c3^2(c0+2c2) + 7/90c1c3^3(c0+2c2) + 7/360c3^4(c0+2c2)",
    },
    PrintedCell { stage: "V3", label: "[W,T,T,T,W]", printed: V3_WTTTW_TAIL },
    PrintedCell { stage: "V4", label: "T", printed: "2(c1+c3)" },
    PrintedCell { stage: "V4", label: "W", printed: "c0 + 2c2 + 2c4" },
    PrintedCell {
        stage: "V4",
        label: "[T,W,T]",
        printed: "1/6c1^2(c0-4c2) + 1/3c1c3(c0+2c2) + 1/6c3^2(c0+2c2) - 2/3(c1+c3)^2c4",
    },
    PrintedCell {
        stage: "V4",
        label: "[T,T,T,T,W]",
        printed: "c1^4(7/360c0 - 2/45c2) + 1/18c1^3c3(c0-4c2) + 1/36c1^2c3^2(c0-4c2) \
            + 1/45c1^3c3(c0+2c2) + 4/45c1^2c3^2(c0+2c2) + 7/90c1c3^3(c0+2c2) + 7/360c3^4(c0+2c2) \
            - 2/45(c1+c3)^4c4",
    },
    PrintedCell {
        stage: "V4",
        label: "[W,T,T,T,W]",
        printed: "c1^3(1/45c0^2 - 7/90c0c2 + 4/45c2^2) + 1/18c1^2c3(c0+2c2)(c0-4c2) \
            + 1/90c1^2c3(c0+2c2)^2 + 1/45c3^3(c0+2c2^2) + 1/15c1c3^2(c0+2c2)^2 \
            - 1/45(c0+2c2)(c1+c3)^3c4 + 4/45(c1+c3)^3c4^2 - 1/18c1^2(c0-4c2)c4(c1+c3) \
            - 1/9c1c3(c1+c3)(c0+2c2)c4 - 1/18c3^2(c1+c3)(c0+2c2)c4",
    },
];

/// The printed `(c0+2c2^2)` factor, and the grade-consistent reading.
pub const SUSPECT_FACTOR: (&str, &str) = ("c3^3(c0+2c2^2)", "c3^3(c0+2c2)^2");

#[derive(Debug, Clone, PartialEq)]
pub enum CellStatus {
    Match,
    /// `derived - printed`, nonzero.
    Discrepancy(CoeffPolynomial),
}

#[derive(Debug, Clone)]
pub struct CellComparison {
    pub stage: &'static str,
    pub label: &'static str,
    pub printed: CoeffPolynomial,
    pub derived: CoeffPolynomial,
    pub status: CellStatus,
}

impl CellComparison {
    /// Whether the cell matches after replacing the suspect factor.
    pub fn matches_corrected(&self, cell: &PrintedCell) -> bool {
        let fixed = cell.printed.replace(SUSPECT_FACTOR.0, SUSPECT_FACTOR.1);
        CoeffPolynomial::parse(&fixed).map(|p| p == self.derived).unwrap_or(false)
    }
}

/// Compares every printed cell with the derived polynomial.
pub fn compare_tables() -> Vec<CellComparison> {
    let alg = Algebra::quotient();
    let e = expand_scheme();
    PRINTED
        .iter()
        .map(|cell| {
            let v = match cell.stage {
                "V2" => &e.v2,
                "V3" => &e.v3,
                _ => &e.v4,
            };
            let printed = CoeffPolynomial::parse(cell.printed).expect("printed cell parses");
            let derived = alg.coefficient(v, cell.label);
            let diff = &derived - &printed;
            let status = if diff.is_zero() { CellStatus::Match } else { CellStatus::Discrepancy(diff) };
            CellComparison { stage: cell.stage, label: cell.label, printed, derived, status }
        })
        .collect()
}
