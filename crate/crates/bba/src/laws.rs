//! Law suites checked through the oracle interface on random samples.
//! Constructors use small sample counts for validation; tests run the
//! full-strength suites.

use crate::blackbox::{BlackBox, Kind, Op};
use crate::error::{Error, Result};

/// Associativity, identity, and inverse laws on `samples` random triples.
pub fn check_group_laws(bb: &mut BlackBox, samples: usize) -> Result<()> {
    let id = bb.identity()?;
    for _ in 0..samples {
        let x = bb.sample()?;
        let y = bb.sample()?;
        let z = bb.sample()?;
        let xy_z = {
            let xy = bb.compose(&x, &y)?;
            bb.compose(&xy, &z)?
        };
        let x_yz = {
            let yz = bb.compose(&y, &z)?;
            bb.compose(&x, &yz)?
        };
        if !bb.equal(&xy_z, &x_yz)? {
            return Err(Error::ContractViolation("associativity fails".into()));
        }
        let ex = bb.compose(&id, &x)?;
        let xe = bb.compose(&x, &id)?;
        if !bb.equal(&ex, &x)? || !bb.equal(&xe, &x)? {
            return Err(Error::ContractViolation("identity law fails".into()));
        }
        let xi = bb.invert(&x)?;
        let prod = bb.compose(&x, &xi)?;
        if !bb.equal(&prod, &id)? {
            return Err(Error::ContractViolation("inverse law fails".into()));
        }
    }
    Ok(())
}

/// Field axioms on `samples` random triples: commutativity and
/// associativity of both operations, distributivity, units, inverses of
/// nonzero elements.
pub fn check_field_laws(bb: &mut BlackBox, samples: usize) -> Result<()> {
    if bb.kind() != Kind::Field {
        return Err(Error::SignatureMismatch("field laws need a field box".into()));
    }
    let zero = bb.zero()?;
    let one = bb.one()?;
    for _ in 0..samples {
        let x = bb.sample()?;
        let y = bb.sample()?;
        let z = bb.sample()?;

        let xy = bb.add(&x, &y)?;
        let yx = bb.add(&y, &x)?;
        let mxy = bb.mul(&x, &y)?;
        let myx = bb.mul(&y, &x)?;
        if !bb.equal(&xy, &yx)? || !bb.equal(&mxy, &myx)? {
            return Err(Error::ContractViolation("commutativity fails".into()));
        }

        let xy_sum = bb.add(&x, &y)?;
        let yz_sum = bb.add(&y, &z)?;
        let a1 = bb.add(&xy_sum, &z)?;
        let a2 = bb.add(&x, &yz_sum)?;
        let xy_prod = bb.mul(&x, &y)?;
        let yz_prod = bb.mul(&y, &z)?;
        let m1 = bb.mul(&xy_prod, &z)?;
        let m2 = bb.mul(&x, &yz_prod)?;
        if !bb.equal(&a1, &a2)? || !bb.equal(&m1, &m2)? {
            return Err(Error::ContractViolation("associativity fails".into()));
        }

        let lhs = bb.mul(&x, &yz_sum)?;
        let xz_prod = bb.mul(&x, &z)?;
        let rhs = bb.add(&xy_prod, &xz_prod)?;
        if !bb.equal(&lhs, &rhs)? {
            return Err(Error::ContractViolation("distributivity fails".into()));
        }

        let zx = bb.add(&zero, &x)?;
        let ox = bb.mul(&one, &x)?;
        if !bb.equal(&zx, &x)? || !bb.equal(&ox, &x)? {
            return Err(Error::ContractViolation("unit laws fail".into()));
        }

        if !bb.equal(&x, &zero)? {
            let xi = bb.apply(Op::Inv, &[&x])?;
            let prod = bb.mul(&x, &xi)?;
            if !bb.equal(&prod, &one)? {
                return Err(Error::ContractViolation("multiplicative inverse fails".into()));
            }
        }
    }
    Ok(())
}

/// The congruence property of an equality relation: on random triples with
/// `equal(x, x')`, every binary operation must respect the identification.
pub fn check_congruence(bb: &mut BlackBox, samples: usize) -> Result<()> {
    let binary_ops: Vec<Op> = bb
        .signature()
        .operations()
        .iter()
        .filter(|s| s.arity == 2)
        .map(|s| s.op)
        .collect();
    for _ in 0..samples {
        let x = bb.sample()?;
        let x2 = bb.sample()?;
        let y = bb.sample()?;
        if !bb.equal(&x, &x2)? {
            continue;
        }
        for &op in &binary_ops {
            let left = bb.apply(op, &[&x, &y])?;
            let left2 = bb.apply(op, &[&x2, &y])?;
            let right = bb.apply(op, &[&y, &x])?;
            let right2 = bb.apply(op, &[&y, &x2])?;
            if !bb.equal(&left, &left2)? || !bb.equal(&right, &right2)? {
                return Err(Error::CongruenceViolation(format!("{op:?} breaks a class")));
            }
        }
    }
    Ok(())
}
