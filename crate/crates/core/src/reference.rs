//! Published census values for degrees 1 to 7, used to annotate reports with any
//! disagreement between the computation and the published tables.

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReferenceSide {
    pub classes: usize,
    pub components: usize,
    pub genus: (u32, u32),
    pub ambiguous: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReferenceSummary {
    pub degree: usize,
    pub abelian: ReferenceSide,
    pub non_abelian: ReferenceSide,
}

const fn side(classes: usize, components: usize, genus: (u32, u32), ambiguous: usize) -> ReferenceSide {
    ReferenceSide {
        classes,
        components,
        genus,
        ambiguous,
    }
}

pub const SUMMARY: [ReferenceSummary; 7] = [
    ReferenceSummary { degree: 1, abelian: side(1, 1, (0, 0), 0), non_abelian: side(0, 0, (0, 0), 0) },
    ReferenceSummary { degree: 2, abelian: side(2, 1, (0, 0), 0), non_abelian: side(1, 1, (0, 0), 0) },
    ReferenceSummary { degree: 3, abelian: side(7, 2, (0, 0), 0), non_abelian: side(4, 1, (0, 0), 0) },
    ReferenceSummary { degree: 4, abelian: side(26, 5, (0, 0), 0), non_abelian: side(34, 6, (0, 0), 0) },
    ReferenceSummary { degree: 5, abelian: side(91, 8, (0, 0), 0), non_abelian: side(227, 13, (0, 0), 0) },
    ReferenceSummary { degree: 6, abelian: side(490, 28, (0, 0), 1), non_abelian: side(2316, 88, (0, 0), 13) },
    ReferenceSummary { degree: 7, abelian: side(2773, 41, (0, 1), 5), non_abelian: side(26586, 88, (0, 11), 3) },
];

/// One published row of ambiguous invariants.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReferenceRow {
    pub no: &'static str,
    pub stratum: &'static str,
    pub index: usize,
    pub valency: &'static str,
    pub components: usize,
    pub relationship: &'static str,
}

const fn row(
    no: &'static str,
    stratum: &'static str,
    index: usize,
    valency: &'static str,
    components: usize,
    relationship: &'static str,
) -> ReferenceRow {
    ReferenceRow {
        no,
        stratum,
        index,
        valency,
        components,
        relationship,
    }
}

const SYMMETRIC: &str = "one pair of mirror-symmetric curves, mirroring each other";
const CONJ_AND_CLOSED: &str = "one mirror-conjugate pair & one mirror-closed curve";

pub const DEGREE6_ROWS: [ReferenceRow; 13] = [
    row("6-1", "A_3(0,8)", 15, "(3^5|2^7,1|5,4,3^2)", 2, "two identical, mirror-closed curves"),
    row("6-2", "Q_1(-1^2,0^3,2)", 12, "(3^4|2^6|6,3,2,1)", 2, "two identical, mirror-closed curves"),
    row("6-3", "Q_2(-1^2,0,6)", 12, "(3^4|2^6|6,3,2,1)", 2, "two identical, mirror-closed curves"),
    row("6-4", "Q_2(0^2,2^2)", 12, "(3^4|2^6|6,3,2,1)", 3, "three identical, mirror-closed curves"),
    row("6-5", "Q_3(2,6)", 12, "(3^4|2^6|6,3,2,1)", 2, "two identical, mirror-closed curves"),
    row("6-6", "Q_2(-1^2,3^2)", 15, "(3^5|2^7,1|6,5,3,1)", 2, "two distinct, mirror-closed curves"),
    row("6-7", "Q_2(-1^2,3^2)", 15, "(3^5|2^7,1|5,4,3^2)", 2, SYMMETRIC),
    row("6-8", "Q_3(-1,9)", 22, "(3^7,1|2^11|6,5,4^2,3)", 2, SYMMETRIC),
    row("6-9", "Q_2(-1^2,0,6)", 24, "(3^8|2^12|6,5,4^2,3,2)", 2, "one mirror-conjugate pair"),
    row("6-10", "Q_2(-1^3,7)", 27, "(3^9|2^13,1|6^2,5,4,3^2)", 3, CONJ_AND_CLOSED),
    row("6-11", "Q_2(-1,0,1,4)", 36, "(3^12|2^18|6^2,5^2,4^2,3^2)", 3, CONJ_AND_CLOSED),
    row("6-12", "Q_3(1,7)", 54, "(3^18|2^27|6^4,5^3,4^3,3)", 3, CONJ_AND_CLOSED),
    row("6-13", "Q_3(-1,9)", 66, "(3^22|2^33|6^6,5^3,4^3,3)", 4, "two mirror-conjugate pairs"),
];

pub const DEGREE7_ROWS: [ReferenceRow; 8] = [
    row("7-1", "A_4(12)", 7, "(3^2,1|2^3,1|4,3)", 2, SYMMETRIC),
    row("7-2", "A_3(0,2,6)", 16, "(3^5,1|2^8|7,4,3,2)", 2, "two distinct, mirror-closed curves"),
    row("7-3", "A_4(12)", 21, "(3^7|2^11|6,5,4,3^2)", 2, "two distinct, mirror-closed curves"),
    row("7-4", "A_4(12)", 42, "(3^14|2^21|7^2,5^2,4^3,3^2)", 2, "two distinct, mirror-closed curves"),
    row("7-5", "A_3(0,2,6)", 48, "(3^16|2^24|7^2,6,5^2,4^3,3^2)", 2, "one mirror-conjugate pair"),
    row("7-6", "Q_2(-1,1^3,2)", 16, "(3^5,1|2^8|7,6,2,1)", 2, "one mirror-conjugate pair"),
    row("7-7", "Q_4(12)", 28, "(3^9,1|2^14|7^2,6,3^2,2)", 2, "two distinct, mirror-closed curves"),
    row("7-8", "Q_3(-1^2,10)", 36, "(3^12|2^18|7^3,6,3^2,2,1)", 2, "two distinct, mirror-closed curves"),
];

/// The published prose counts this many exceptional degree-7 cases, one more than its table.
pub const DEGREE7_PROSE_CASES: usize = 9;

pub fn summary(degree: usize) -> Option<&'static ReferenceSummary> {
    SUMMARY.iter().find(|s| s.degree == degree)
}

pub fn rows(degree: usize) -> &'static [ReferenceRow] {
    match degree {
        6 => &DEGREE6_ROWS,
        7 => &DEGREE7_ROWS,
        _ => &[],
    }
}
