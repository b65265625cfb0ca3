use super::{Element, FactorElem, FreeProductCtx, Syllable};
use crate::error::RelPathError;

/// A path in the relative Cayley graph: a base vertex and a sequence of letters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyllablePath {
    letters: Vec<Syllable>,
    base: Element,
}

/// A maximal run of letters `start..end` from one factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub factor: usize,
    pub start: usize,
    pub end: usize,
    pub label: FactorElem,
}

/// Components whose vertices share the coset `rep · H_λ`; member `i` starts
/// at `rep · offsets[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetClass {
    pub factor: usize,
    pub rep: Element,
    pub members: Vec<usize>,
    pub offsets: Vec<FactorElem>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectivityReport {
    pub components: Vec<Component>,
    pub classes: Vec<CosetClass>,
    pub isolated: Vec<usize>,
}

impl ConnectivityReport {
    /// Re-checks every coset witness by normal-form division.
    pub fn verify(&self, path: &SyllablePath, ctx: &FreeProductCtx) -> Result<bool, RelPathError> {
        let vs = path.vertices(ctx)?;
        for class in &self.classes {
            for (&i, h) in class.members.iter().zip(&class.offsets) {
                let c = &self.components[i];
                let expected = ctx.mul(&class.rep, &ctx.factor_element(class.factor, h.clone())?)?;
                if c.factor != class.factor || !ctx.equal(&vs[c.start], &expected)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Validates letters: factor letters are nonidentity and consecutive letters
/// of one factor do not multiply to the identity.
pub fn parse_path(letters: Vec<Syllable>, ctx: &FreeProductCtx) -> Result<SyllablePath, RelPathError> {
    for (pos, s) in letters.iter().enumerate() {
        match s {
            Syllable::Factor(l, h) => {
                let f = ctx.factors().get(*l).ok_or_else(|| RelPathError::UnknownFactor(l.to_string()))?;
                if !f.contains(h) {
                    return Err(RelPathError::BadElement {
                        text: h.to_string(),
                        message: format!("not an element of `{}`", ctx.label(*l)),
                    });
                }
                if f.is_identity(h)? {
                    return Err(RelPathError::IdentityLetter { pos });
                }
            }
            Syllable::Free(l) => {
                if l.generator() >= ctx.free().len() {
                    return Err(RelPathError::Parse {
                        pos,
                        message: "unknown free letter".into(),
                    });
                }
            }
        }
    }
    let path = SyllablePath {
        letters,
        base: Element::identity(),
    };
    for c in path.components(ctx)? {
        if ctx.factor(c.factor).is_identity(&c.label)? {
            return Err(RelPathError::IdentityRun {
                start: c.start,
                end: c.end,
            });
        }
    }
    Ok(path)
}

impl SyllablePath {
    pub fn parse(text: &str, ctx: &FreeProductCtx) -> Result<SyllablePath, RelPathError> {
        parse_path(ctx.parse_letters(text)?, ctx)
    }

    /// Concatenation that skips the identity-run check: adjacent pieces of a
    /// cycle may merge across their seam.
    pub(crate) fn raw(letters: Vec<Syllable>) -> SyllablePath {
        SyllablePath {
            letters,
            base: Element::identity(),
        }
    }

    pub fn with_base(mut self, base: Element) -> SyllablePath {
        self.base = base;
        self
    }

    pub fn letters(&self) -> &[Syllable] {
        &self.letters
    }

    pub fn base(&self) -> &Element {
        &self.base
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn format(&self, ctx: &FreeProductCtx) -> String {
        let parts: Vec<String> = self.letters.iter().map(|s| ctx.format_syllable(s)).collect();
        parts.join(" ")
    }

    /// Vertex `i` is the base times the first `i` letters.
    pub fn vertices(&self, ctx: &FreeProductCtx) -> Result<Vec<Element>, RelPathError> {
        let mut cur = self.base.clone();
        let mut out = vec![cur.clone()];
        for s in &self.letters {
            ctx.push(&mut cur, s.clone())?;
            out.push(cur.clone());
        }
        Ok(out)
    }

    /// The element read along the path.
    pub fn label_element(&self, ctx: &FreeProductCtx) -> Result<Element, RelPathError> {
        let mut e = Element::identity();
        for s in &self.letters {
            ctx.push(&mut e, s.clone())?;
        }
        Ok(e)
    }

    pub fn is_cycle(&self, ctx: &FreeProductCtx) -> Result<bool, RelPathError> {
        Ok(self.label_element(ctx)?.is_identity())
    }

    pub fn components(&self, ctx: &FreeProductCtx) -> Result<Vec<Component>, RelPathError> {
        let mut out = Vec::new();
        let mut i = 0;
        while i < self.letters.len() {
            let Syllable::Factor(lam, h) = &self.letters[i] else {
                i += 1;
                continue;
            };
            let f = ctx.factor(*lam);
            let mut label = h.clone();
            let mut j = i + 1;
            while let Some(Syllable::Factor(l, g)) = self.letters.get(j) {
                if l != lam {
                    break;
                }
                label = f.mul(&label, g);
                j += 1;
            }
            out.push(Component {
                factor: *lam,
                start: i,
                end: j,
                label,
            });
            i = j;
        }
        Ok(out)
    }

    /// Whether the vertices of two components lie in one coset of their factor.
    pub fn connected(
        &self,
        ctx: &FreeProductCtx,
        vertices: &[Element],
        p: &Component,
        q: &Component,
    ) -> Result<bool, RelPathError> {
        if p.factor != q.factor {
            return Ok(false);
        }
        let d = ctx.mul(&ctx.inverse(&vertices[p.start]), &vertices[q.start])?;
        Ok(ctx.in_factor(&d, p.factor).is_some())
    }

    /// Partition of the components into connectedness classes.
    pub fn connectivity_classes(&self, ctx: &FreeProductCtx) -> Result<ConnectivityReport, RelPathError> {
        let vs = self.vertices(ctx)?;
        let components = self.components(ctx)?;
        let mut classes: Vec<CosetClass> = Vec::new();
        'next: for (i, c) in components.iter().enumerate() {
            for class in classes.iter_mut().filter(|k| k.factor == c.factor) {
                let d = ctx.mul(&ctx.inverse(&class.rep), &vs[c.start])?;
                if let Some(h) = ctx.in_factor(&d, c.factor) {
                    class.members.push(i);
                    class.offsets.push(h);
                    continue 'next;
                }
            }
            classes.push(CosetClass {
                factor: c.factor,
                rep: vs[c.start].clone(),
                members: vec![i],
                offsets: vec![ctx.factor(c.factor).identity()],
            });
        }
        let isolated = classes
            .iter()
            .filter(|k| k.members.len() == 1)
            .map(|k| k.members[0])
            .collect();
        Ok(ConnectivityReport {
            components,
            classes,
            isolated,
        })
    }

    /// As [`connectivity_classes`](Self::connectivity_classes), for cycles only.
    pub fn connectivity(&self, ctx: &FreeProductCtx) -> Result<ConnectivityReport, RelPathError> {
        if !self.is_cycle(ctx)? {
            return Err(RelPathError::NotACycle);
        }
        self.connectivity_classes(ctx)
    }
}

/// Membership of the label in `W(Ω, m)` with `Ω` empty: `x_0 h_0 x_1 ... h_l x_{l+1}`
/// with each `x_i` a free letter or absent, each `h_i` a nonidentity factor
/// letter, and `x_{i+1}` present whenever `h_i`, `h_{i+1}` share a factor.
/// With `Ω = ∅` the ball `{h : |h|_Ω ≤ m}` is `{1}`, so `m` plays no role.
pub fn check_w_membership(path: &SyllablePath, _m: u64, ctx: &FreeProductCtx) -> Result<bool, RelPathError> {
    let ls = path.letters();
    for (i, s) in ls.iter().enumerate() {
        let prev = i.checked_sub(1).map(|j| &ls[j]);
        match (prev, s) {
            (Some(Syllable::Free(_)), Syllable::Free(_)) => return Ok(false),
            (Some(Syllable::Factor(l, _)), Syllable::Factor(m, _)) if l == m => return Ok(false),
            _ => {}
        }
        if let Syllable::Factor(l, h) = s {
            if ctx.factor(*l).is_identity(h)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
