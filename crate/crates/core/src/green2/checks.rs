use num::{Signed, Zero};

use super::QtildeMatrix;
use crate::partitions::{dominance_leq, MultiPartition};
use crate::qpoly::{Polynomial, Rational};
use crate::report::{CheckResult, Report};
use crate::typea::{embed, epsilon_product, group_order_p_prime};

/// Odd prime powers at which integrality is sampled.
pub const INTEGRALITY_SAMPLES: [i64; 6] = [3, 5, 7, 9, 11, 13];

/// Every factor carries a single Jordan block.
pub fn is_regular_label(x: &MultiPartition) -> bool {
    x.factors().iter().all(|p| p.len() <= 1)
}

fn is_identity_label(x: &MultiPartition) -> bool {
    x.factors().iter().all(|p| p.parts().iter().all(|&a| a == 1))
}

fn dominated(a: &MultiPartition, b: &MultiPartition) -> bool {
    a.factors().iter().zip(b.factors()).all(|(x, y)| dominance_leq(x, y).unwrap_or(false))
}

/// Identity column, regular column, dominance support, integrality sampling and the
/// induced-class entry.
///
/// Nonnegativity of sampled values is required for split Levis only; for twisted
/// Levis the identity column is `ε_G ε_L |G:L|_{p'}`, which can be negative, and
/// negative values are recorded as findings.
pub fn check_identities(q: &QtildeMatrix) -> Report {
    let subject = format!("{} in {}", q.levi, q.ambient);
    let mut report = Report::default();
    let emb = match embed(&q.ambient, &q.levi) {
        Ok(e) => e,
        Err(e) => {
            let mut r = CheckResult::new("metadata", &subject);
            r.fail(e.to_string());
            report.push(r);
            return report;
        }
    };

    let mut eq1 = CheckResult::new("eq1", &subject);
    let index = group_order_p_prime(&q.ambient)
        .exact_div(&group_order_p_prime(&q.levi))
        .expect("Levi order divides the group order");
    let expected = index.scale(&Rational::from_integer(epsilon_product(&q.ambient, &q.levi).into()));
    match q.cols.iter().position(is_identity_label) {
        None => eq1.fail("no identity column"),
        Some(j) => {
            for (v, row) in q.rows.iter().zip(&q.entries) {
                let want = if is_identity_label(v) { expected.clone() } else { Polynomial::zero() };
                if row[j] != want {
                    eq1.fail(format!("({v}, {}): expected {want}, found {}", q.cols[j], row[j]));
                }
            }
        }
    }
    report.push(eq1);

    let mut reg = CheckResult::new("regular", &subject);
    for (j, u) in q.cols.iter().enumerate().filter(|(_, u)| is_regular_label(u)) {
        let nonzero: Vec<usize> = (0..q.rows.len()).filter(|&i| !q.entries[i][j].is_zero()).collect();
        match nonzero.as_slice() {
            [i] if q.entries[*i][j].is_one() && is_regular_label(&q.rows[*i]) => {}
            _ => reg.fail(format!(
                "column {u}: nonzero rows {:?}",
                nonzero.iter().map(|&i| q.rows[i].to_string()).collect::<Vec<_>>()
            )),
        }
    }
    report.push(reg);

    let mut support = CheckResult::new("dominance_support", &subject);
    let mut induced = CheckResult::new("induced_entry", &subject);
    for (v, row) in q.rows.iter().zip(&q.entries) {
        let lower = emb.class_to_g(&q.ambient, &q.levi, v);
        let upper = emb.induced_class(&q.ambient, &q.levi, v);
        for (u, e) in q.cols.iter().zip(row) {
            if !e.is_zero() && !(dominated(&lower, u) && dominated(u, &upper)) {
                support.fail(format!("({v}, {u}) = {e} outside [{lower}, {upper}]"));
            }
        }
        match q.cols.iter().position(|u| *u == upper) {
            Some(j) if row[j].is_one() => {}
            Some(j) => induced.fail(format!("({v}, {upper}) = {}", row[j])),
            None => induced.fail(format!("induced class {upper} of {v} missing")),
        }
    }
    report.push(support);
    report.push(induced);

    let split = q.levi.is_split();
    let mut integral = CheckResult::new("integrality", &subject);
    for &x in &INTEGRALITY_SAMPLES {
        for (v, row) in q.rows.iter().zip(&q.entries) {
            for (u, e) in q.cols.iter().zip(row) {
                let val = e.eval_int(x);
                if !val.is_integer() {
                    integral.fail(format!("q={x} ({v}, {u}) = {val} not integral"));
                } else if val.is_negative() {
                    let msg = format!("q={x} ({v}, {u}) = {val} negative");
                    if split {
                        integral.fail(msg);
                    } else {
                        integral.note(msg);
                    }
                }
                debug_assert!(val.is_zero() || !e.is_zero());
            }
        }
    }
    report.push(integral);
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::green2::dm_green2;
    use crate::typea::LeviDescriptor;

    fn d(s: &str) -> LeviDescriptor {
        s.parse().unwrap()
    }

    #[test]
    fn printed_gl3_matrix_passes() {
        let q = dm_green2(&d("GL3"), &d("GL3 / 2,1")).unwrap();
        let r = check_identities(&q);
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.results.len(), 5);
    }

    #[test]
    fn twisted_levi_passes_with_findings() {
        let q = dm_green2(&d("GL4"), &d("GL4 / 2@1,1@2")).unwrap();
        let r = check_identities(&q);
        assert!(r.passed(), "{r:?}");
        assert!(!r.get("integrality").unwrap().details.is_empty());
    }

    #[test]
    fn corrupted_entry_is_caught() {
        let mut q = dm_green2(&d("GL3"), &d("GL3 / 2,1")).unwrap();
        q.entries[1][2] = &q.entries[1][2] + &Polynomial::one();
        assert!(!check_identities(&q).passed());
        let mut q = dm_green2(&d("GL3"), &d("GL3 / 2,1")).unwrap();
        q.entries[0][0] = &q.entries[0][0] + &Polynomial::one();
        assert!(!check_identities(&q).get("eq1").unwrap().passed);
        let mut q = dm_green2(&d("GL3"), &d("GL3 / 2,1")).unwrap();
        q.entries[0][2] = Polynomial::one();
        let r = check_identities(&q);
        assert!(!r.get("dominance_support").unwrap().passed);
        assert!(!r.get("regular").unwrap().passed);
    }

    #[test]
    fn labels() {
        assert!(is_regular_label(&MultiPartition::parse("3;2").unwrap()));
        assert!(!is_regular_label(&MultiPartition::parse("3;1,1").unwrap()));
        assert!(is_identity_label(&MultiPartition::parse("1,1;1").unwrap()));
    }
}
