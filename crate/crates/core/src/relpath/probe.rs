use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use super::{Element, Factor, FactorElem, FreeProductCtx, Syllable};
use crate::error::RelPathError;

/// `e = conj · core · conj^-1` with `core` cyclically reduced: its first and
/// last syllables neither cancel nor share a factor.
pub fn cyclic_reduce(ctx: &FreeProductCtx, e: &Element) -> Result<(Element, Element), RelPathError> {
    let mut core = e.syllables().to_vec();
    let mut conj = Element::identity();
    while core.len() >= 2 {
        let n = core.len();
        match (&core[0], &core[n - 1]) {
            (Syllable::Free(f), Syllable::Free(l)) if f.cancels(*l) => {
                ctx.push(&mut conj, core[0].clone())?;
                core = core[1..n - 1].to_vec();
            }
            (Syllable::Factor(lf, g), Syllable::Factor(ll, h)) if lf == ll => {
                let f = ctx.factor(*lf);
                let merged = f.mul(h, g);
                ctx.push(&mut conj, core[0].clone())?;
                let lam = *lf;
                core = core[1..n - 1].to_vec();
                if !f.is_identity(&merged)? {
                    core.push(Syllable::Factor(lam, merged));
                }
            }
            _ => break,
        }
    }
    Ok((Element(core), conj))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hyperbolicity {
    pub hyperbolic: bool,
    pub infinite_order: bool,
    pub core_length: usize,
}

/// Hyperbolic means not conjugate into a peripheral factor: the cyclically
/// reduced form has length at least 2 or is a free letter.
pub fn hyperbolicity(ctx: &FreeProductCtx, g: &Element) -> Result<Hyperbolicity, RelPathError> {
    if g.is_identity() {
        return Err(RelPathError::IdentityElement);
    }
    let (core, _) = cyclic_reduce(ctx, g)?;
    let (hyperbolic, infinite_order) = match core.syllables() {
        [Syllable::Factor(l, h)] => (false, ctx.factor(*l).has_infinite_order(h)?),
        _ => (true, true),
    };
    Ok(Hyperbolicity {
        hyperbolic,
        infinite_order,
        core_length: core.len(),
    })
}

pub fn is_hyperbolic(ctx: &FreeProductCtx, g: &Element) -> Result<bool, RelPathError> {
    Ok(hyperbolicity(ctx, g)?.hyperbolic)
}

/// Conjugacy inside a factor where it is decidable here.
fn factor_conjugator(f: &Factor, g: &FactorElem, h: &FactorElem) -> Result<Option<FactorElem>, RelPathError> {
    if f.equal(g, h)? {
        return Ok(Some(f.identity()));
    }
    match (f, g, h) {
        (Factor::Free(_), FactorElem::Word(u), FactorElem::Word(v)) => Ok(crate::word::conjugator(u, v).map(FactorElem::Word)),
        _ => Ok(None),
    }
}

/// A `c` with `c u c^-1 = v`. Exact when `u` is hyperbolic (cyclic
/// permutations of syllables); for parabolic elements it is exact in free and
/// abelian factors and finds only equal cores otherwise.
pub fn conjugate_cyclic(ctx: &FreeProductCtx, u: &Element, v: &Element) -> Result<Option<Element>, RelPathError> {
    let (cu, wu) = cyclic_reduce(ctx, u)?;
    let (cv, wv) = cyclic_reduce(ctx, v)?;
    if cu.len() != cv.len() {
        return Ok(None);
    }
    let finish = |p: &Element| -> Result<Element, RelPathError> { ctx.product([&wv, p, &ctx.inverse(&wu)]) };
    if let ([Syllable::Factor(l, g)], [Syllable::Factor(m, h)]) = (cu.syllables(), cv.syllables()) {
        if l != m {
            return Ok(None);
        }
        return match factor_conjugator(ctx.factor(*l), g, h)? {
            Some(c) => Ok(Some(finish(&ctx.factor_element(*l, c)?)?)),
            None => Ok(None),
        };
    }
    let n = cu.len();
    let s = cu.syllables();
    't: for j in 0..n.max(1) {
        for i in 0..n {
            if !ctx.syllable_equal(&s[(i + j) % n], &cv.syllables()[i])? {
                continue 't;
            }
        }
        // cv = P^-1 cu P with P the first j syllables
        let p = Element(s[..j].to_vec());
        return Ok(Some(finish(&ctx.inverse(&p))?));
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Commensuration {
    pub p: i64,
    pub q: i64,
    /// `c g1^p c^-1 = g2^q`.
    pub conjugator: Element,
}

/// Searches `g1^p ~ g2^q` for `1 ≤ p, |q| ≤ max_exp`, smallest `p + |q|` first.
pub fn commensurable_bounded(
    ctx: &FreeProductCtx,
    g1: &Element,
    g2: &Element,
    max_exp: i64,
) -> Result<Option<Commensuration>, RelPathError> {
    for total in 2..=2 * max_exp {
        for p in 1..total {
            let q = total - p;
            if p > max_exp || q > max_exp {
                continue;
            }
            let lhs = ctx.pow(g1, p)?;
            for q in [q, -q] {
                let rhs = ctx.pow(g2, q)?;
                if let Some(c) = conjugate_cyclic(ctx, &lhs, &rhs)? {
                    debug_assert!(ctx.equal(&ctx.conjugate(&lhs, &c)?, &rhs)?);
                    return Ok(Some(Commensuration { p, q, conjugator: c }));
                }
            }
        }
    }
    Ok(None)
}

/// `u = γ t^ξ β` with `β a β^-1 = a^ε` and `γ^-1 a γ = a^ε`, `γ, β` in the factor of `a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Twist {
    pub gamma: FactorElem,
    pub beta: FactorElem,
    pub xi: i64,
    pub epsilon: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeRow {
    pub k: i64,
    pub g1: String,
    pub g2: String,
    /// `(p, q, c)` with `c g1^p c^-1 = g2^q`, if found within bounds.
    pub found: Option<(i64, i64, String)>,
    pub identity_verified: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub max_exponent: i64,
    pub rows: Vec<ProbeRow>,
}

impl ProbeReport {
    pub fn all_identities_verified(&self) -> bool {
        self.rows.iter().all(|r| r.identity_verified == Some(true))
    }
}

/// For each `k`, compares `g1 = a^k t a^k t^-1` with `g2 = a^k u a^k u^-1`.
/// With a twist, also checks `g2 = C (a^k t^ξ a^k t^-ξ)^ε C^-1` for
/// `C = γ` when `ε = 1` and `C = γ a^-k` when `ε = -1`.
#[allow(clippy::too_many_arguments)]
pub fn commensuration_probe(
    ctx: &FreeProductCtx,
    lam0: usize,
    a: &FactorElem,
    t: &Element,
    u: &Element,
    ks: RangeInclusive<i64>,
    max_exp: i64,
    twist: Option<&Twist>,
) -> Result<ProbeReport, RelPathError> {
    let f = ctx.factor(lam0);
    if f.is_identity(a)? {
        return Err(RelPathError::Precondition("a is the identity".into()));
    }
    if ctx.in_factor(t, lam0).is_some() || ctx.in_factor(u, lam0).is_some() {
        return Err(RelPathError::Precondition("t and u must lie outside the factor of a".into()));
    }
    let elem = |h: &FactorElem| ctx.factor_element(lam0, h.clone());
    if let Some(tw) = twist {
        if tw.epsilon.abs() != 1 {
            return Err(RelPathError::Precondition("ε must be ±1".into()));
        }
        let a_eps = f.pow(a, tw.epsilon);
        let beta_side = f.mul(&f.mul(&tw.beta, a), &f.inverse(&tw.beta));
        let gamma_side = f.mul(&f.mul(&f.inverse(&tw.gamma), a), &tw.gamma);
        if !f.equal(&beta_side, &a_eps)? || !f.equal(&gamma_side, &a_eps)? {
            return Err(RelPathError::Precondition("β, γ do not twist a by ε".into()));
        }
        let expected = ctx.product([&elem(&tw.gamma)?, &ctx.pow(t, tw.xi)?, &elem(&tw.beta)?])?;
        if !ctx.equal(&expected, u)? {
            return Err(RelPathError::Precondition("u is not γ t^ξ β".into()));
        }
    }
    let mut rows = Vec::new();
    for k in ks {
        let ak = elem(&f.pow(a, k))?;
        let g1 = ctx.product([&ak, t, &ak, &ctx.inverse(t)])?;
        let g2 = ctx.product([&ak, u, &ak, &ctx.inverse(u)])?;
        let found = commensurable_bounded(ctx, &g1, &g2, max_exp)?.map(|c| (c.p, c.q, ctx.format(&c.conjugator)));
        let identity_verified = match twist {
            None => None,
            Some(tw) => {
                let tx = ctx.pow(t, tw.xi)?;
                let inner = ctx.product([&ak, &tx, &ak, &ctx.inverse(&tx)])?;
                let c = if tw.epsilon == 1 {
                    elem(&tw.gamma)?
                } else {
                    ctx.mul(&elem(&tw.gamma)?, &ctx.inverse(&ak))?
                };
                let rhs = ctx.conjugate(&ctx.pow(&inner, tw.epsilon)?, &c)?;
                Some(ctx.equal(&g2, &rhs)?)
            }
        };
        rows.push(ProbeRow {
            k,
            g1: ctx.format(&g1),
            g2: ctx.format(&g2),
            found,
            identity_verified,
        });
    }
    Ok(ProbeReport {
        max_exponent: max_exp,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::Alphabet;

    #[test]
    fn model_elements() {
        let ctx = FreeProductCtx::cyclic_model();
        let e = |s: &str| ctx.element(s).unwrap();
        let h = hyperbolicity(&ctx, &e("[H: a^2] x1 [H: a^3] x2")).unwrap();
        assert!(h.hyperbolic && h.infinite_order);
        assert!(!is_hyperbolic(&ctx, &e("[H: a]")).unwrap());
        assert!(!is_hyperbolic(&ctx, &e("x1 [H: a] x1^-1")).unwrap());
        assert!(is_hyperbolic(&ctx, &e("x1")).unwrap());
        assert_eq!(is_hyperbolic(&ctx, &Element::identity()), Err(RelPathError::IdentityElement));
    }

    #[test]
    fn cyclic_conjugator_is_explicit() {
        let ctx = FreeProductCtx::cyclic_model();
        let e = |s: &str| ctx.element(s).unwrap();
        let u = e("[H: a] x1 [H: a^2] x2");
        let v = ctx.conjugate(&u, &e("x2 [H: a^3] x1^-1")).unwrap();
        let c = conjugate_cyclic(&ctx, &u, &v).unwrap().unwrap();
        assert!(ctx.equal(&ctx.conjugate(&u, &c).unwrap(), &v).unwrap());
        assert!(conjugate_cyclic(&ctx, &u, &e("[H: a] x1 [H: a^3] x2")).unwrap().is_none());
    }

    #[test]
    fn unrelated_letter_is_not_found() {
        let ctx = FreeProductCtx::new(vec![("H", Factor::Free(Alphabet::of(&["a"])))], Alphabet::of(&["t", "u"])).unwrap();
        let a = ctx.factor(0).parse("a").unwrap();
        let rep = commensuration_probe(&ctx, 0, &a, &ctx.element("t").unwrap(), &ctx.element("u").unwrap(), 1..=4, 3, None).unwrap();
        assert!(rep.rows.iter().all(|r| r.found.is_none() && r.identity_verified.is_none()));
    }
}
