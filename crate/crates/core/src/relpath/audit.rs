use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::path::{check_w_membership, parse_path, Component, SyllablePath};
use super::{Element, Factor, FactorElem, FreeProductCtx, Syllable};
use crate::error::RelPathError;
use crate::word::{Letter, Word};

const MAX_ATTEMPTS: usize = 10_000;

fn random_word(rng: &mut ChaCha8Rng, rank: usize, max_len: usize) -> Word {
    loop {
        let n = rng.gen_range(1..=max_len);
        let w = Word::from_letters((0..n).map(|_| Letter::new(rng.gen_range(0..rank), rng.gen())));
        if !w.is_identity() {
            return w;
        }
    }
}

fn random_factor_elem(ctx: &FreeProductCtx, lam: usize, rng: &mut ChaCha8Rng) -> Result<FactorElem, RelPathError> {
    let f = ctx.factor(lam);
    loop {
        let h = match f {
            Factor::Free(al) => FactorElem::Word(random_word(rng, al.len(), 3)),
            Factor::Presented(t) => {
                let base: Vec<usize> = t.base_generators().collect();
                let w = random_word(rng, base.len(), 3);
                FactorElem::Word(Word::from_letters(w.letters().iter().map(|l| Letter::new(base[l.generator()], l.is_inverse()))))
            }
            Factor::Cyclic(m) => FactorElem::Residue(rng.gen_range(0..*m)),
            Factor::FreeAbelian(r) => FactorElem::Vector((0..*r).map(|_| rng.gen_range(-3..=3)).collect()),
        };
        if !f.is_identity(&h)? {
            return Ok(h);
        }
    }
}

fn random_letter(ctx: &FreeProductCtx, rng: &mut ChaCha8Rng) -> Result<Syllable, RelPathError> {
    let nf = ctx.factors().len();
    let nx = ctx.free().len();
    let pick = rng.gen_range(0..nf + nx);
    if pick < nf {
        Ok(Syllable::Factor(pick, random_factor_elem(ctx, pick, rng)?))
    } else {
        Ok(Syllable::Free(Letter::new(pick - nf, rng.gen())))
    }
}

/// A random cycle: a few random blocks followed by the normal form of their
/// inverse, rotated at random. Candidates with an identity run are redrawn.
pub fn random_trivial_path(ctx: &FreeProductCtx, rng: &mut ChaCha8Rng) -> Result<(SyllablePath, usize), RelPathError> {
    for attempt in 1..=MAX_ATTEMPTS {
        let mut letters = Vec::new();
        for _ in 0..rng.gen_range(1..=4) {
            for _ in 0..rng.gen_range(1..=5) {
                letters.push(random_letter(ctx, rng)?);
            }
        }
        let mut e = Element::identity();
        for s in &letters {
            ctx.push(&mut e, s.clone())?;
        }
        letters.extend(ctx.inverse(&e).0);
        let k = rng.gen_range(0..letters.len());
        letters.rotate_left(k);
        match parse_path(letters, ctx) {
            Ok(p) => return Ok((p, attempt)),
            Err(RelPathError::IdentityRun { .. } | RelPathError::IdentityLetter { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(RelPathError::Precondition("no valid random cycle found".into()))
}

/// A random label in `W`: `1..=max_h` factor letters with free letters between.
pub fn random_w_path(ctx: &FreeProductCtx, rng: &mut ChaCha8Rng, max_h: usize) -> Result<SyllablePath, RelPathError> {
    let nf = ctx.factors().len();
    let nx = ctx.free().len();
    let free = |rng: &mut ChaCha8Rng| Syllable::Free(Letter::new(rng.gen_range(0..nx), rng.gen()));
    let mut letters = Vec::new();
    if nx > 0 && rng.gen_bool(0.5) {
        letters.push(free(rng));
    }
    let mut prev: Option<usize> = None;
    for _ in 0..rng.gen_range(1..=max_h) {
        let lam = rng.gen_range(0..nf);
        let need_x = prev == Some(lam);
        if nx == 0 && need_x {
            continue;
        }
        if prev.is_some() && nx > 0 && (need_x || rng.gen_bool(0.5)) {
            letters.push(free(rng));
        }
        letters.push(Syllable::Factor(lam, random_factor_elem(ctx, lam, rng)?));
        prev = Some(lam);
    }
    if nx > 0 && rng.gen_bool(0.5) {
        letters.push(free(rng));
    }
    parse_path(letters, ctx)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsolationAudit {
    pub seed: u64,
    pub instances: usize,
    pub components: usize,
    pub isolated: usize,
    pub isolated_nonidentity: usize,
    pub redraws: usize,
    pub examples: Vec<String>,
}

impl IsolationAudit {
    pub fn passed(&self) -> bool {
        self.isolated_nonidentity == 0
    }
}

/// Random trivial cycles: counts isolated components with a nonidentity label.
pub fn isolation_audit(ctx: &FreeProductCtx, seed: u64, instances: usize) -> Result<IsolationAudit, RelPathError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = IsolationAudit {
        seed,
        instances,
        components: 0,
        isolated: 0,
        isolated_nonidentity: 0,
        redraws: 0,
        examples: Vec::new(),
    };
    for _ in 0..instances {
        let (path, attempts) = random_trivial_path(ctx, &mut rng)?;
        out.redraws += attempts - 1;
        let rep = path.connectivity(ctx)?;
        out.components += rep.components.len();
        out.isolated += rep.isolated.len();
        for &i in &rep.isolated {
            let c = &rep.components[i];
            if !ctx.factor(c.factor).is_identity(&c.label)? {
                out.isolated_nonidentity += 1;
                if out.examples.len() < 5 {
                    out.examples.push(path.format(ctx));
                }
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegularityReport {
    /// `max(|r|, |r'|)`.
    pub c: usize,
    pub q_components: usize,
    pub q_prime_components: usize,
    pub irregular_q: usize,
    pub irregular_q_prime: usize,
    /// Pairs of components of `q` that are connected to each other.
    pub backtracking: usize,
    /// Components of `q'` (or `q`) connected to two or more components of `q` (or `q'`).
    pub pairing_violations: usize,
    /// `(i, j)`: component `i` of `q` is connected to component `j` of `q'^-1`.
    pub matches: Vec<(usize, usize)>,
}

impl RegularityReport {
    /// No irregular components when `C ≤ 1`.
    pub fn part_a(&self) -> bool {
        self.c > 1 || self.irregular_q + self.irregular_q_prime == 0
    }

    /// At most `4C` irregular components on each side when `C ≥ 2`.
    pub fn part_b(&self) -> bool {
        self.c < 2 || (self.irregular_q <= 4 * self.c && self.irregular_q_prime <= 4 * self.c)
    }

    /// Matched components form one run `p_{s+i} ~ p'_{s'+i}`.
    pub fn aligned(&self) -> bool {
        self.matches.windows(2).all(|w| w[1].0 == w[0].0 + 1 && w[1].1 == w[0].1 + 1)
    }
}

/// Audits the cycle `o = r q r' q'` with `q`, `q'` labelled in `W`.
pub fn regularity_audit(
    ctx: &FreeProductCtx,
    r: &SyllablePath,
    q: &SyllablePath,
    r2: &SyllablePath,
    q2: &SyllablePath,
) -> Result<RegularityReport, RelPathError> {
    if !check_w_membership(q, 0, ctx)? {
        return Err(RelPathError::NotInW("q".into()));
    }
    if !check_w_membership(q2, 0, ctx)? {
        return Err(RelPathError::NotInW("q'".into()));
    }
    let parts = [r, q, r2, q2];
    let letters: Vec<Syllable> = parts.iter().flat_map(|p| p.letters().iter().cloned()).collect();
    let o = SyllablePath::raw(letters);
    if !o.is_cycle(ctx)? {
        return Err(RelPathError::NotACycle);
    }
    let vs = o.vertices(ctx)?;
    // components of each piece, positioned in o
    let mut comps: Vec<(usize, Component)> = Vec::new();
    let mut offset = 0;
    for (which, p) in parts.iter().enumerate() {
        for mut c in p.components(ctx)? {
            c.start += offset;
            c.end += offset;
            comps.push((which, c));
        }
        offset += p.len();
    }
    let n = comps.len();
    let mut link = vec![vec![false; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let c = o.connected(ctx, &vs, &comps[i].1, &comps[j].1)?;
            link[i][j] = c;
            link[j][i] = c;
        }
    }
    let of = |w: usize| -> Vec<usize> { (0..n).filter(|&i| comps[i].0 == w).collect() };
    let irregular = |w: usize| of(w).into_iter().filter(|&i| !link[i].iter().any(|&b| b)).count();
    let qs = of(1);
    let q2s = of(3);
    let mut backtracking = 0;
    for (a, &i) in qs.iter().enumerate() {
        backtracking += qs[a + 1..].iter().filter(|&&j| link[i][j]).count();
    }
    let mut pairing_violations = 0;
    for &j in &q2s {
        pairing_violations += (qs.iter().filter(|&&i| link[i][j]).count() > 1) as usize;
    }
    for &i in &qs {
        pairing_violations += (q2s.iter().filter(|&&j| link[i][j]).count() > 1) as usize;
    }
    let mut matches = Vec::new();
    for (a, &i) in qs.iter().enumerate() {
        for (b, &j) in q2s.iter().rev().enumerate() {
            if link[i][j] {
                matches.push((a, b));
            }
        }
    }
    Ok(RegularityReport {
        c: r.len().max(r2.len()),
        q_components: qs.len(),
        q_prime_components: q2s.len(),
        irregular_q: irregular(1),
        irregular_q_prime: irregular(3),
        backtracking,
        pairing_violations,
        matches,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegularityAudit {
    pub seed: u64,
    pub instances: usize,
    pub max_c: usize,
    pub redraws: usize,
    pub part_a_failures: usize,
    pub part_b_failures: usize,
    pub pairing_violations: usize,
    pub backtracking: usize,
    pub irregular_total: usize,
}

impl RegularityAudit {
    pub fn passed(&self) -> bool {
        self.part_a_failures + self.part_b_failures + self.pairing_violations + self.backtracking == 0
    }
}

/// Random cycles `r q r' q'` with `|r|, |r'| ≤ max_c`: `q` is a random `W`
/// label and `q'` the normal form of `(r q r')^-1`, redrawn until it is in `W`.
pub fn random_regularity_audit(
    ctx: &FreeProductCtx,
    seed: u64,
    instances: usize,
    max_c: usize,
) -> Result<RegularityAudit, RelPathError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = RegularityAudit {
        seed,
        instances,
        max_c,
        redraws: 0,
        part_a_failures: 0,
        part_b_failures: 0,
        pairing_violations: 0,
        backtracking: 0,
        irregular_total: 0,
    };
    let mut done = 0;
    let mut attempts = 0;
    while done < instances {
        attempts += 1;
        if attempts > instances * MAX_ATTEMPTS {
            return Err(RelPathError::Precondition("too many redraws".into()));
        }
        let q = random_w_path(ctx, &mut rng, 6)?;
        let side = |rng: &mut ChaCha8Rng| -> Result<Option<SyllablePath>, RelPathError> {
            let n = rng.gen_range(0..=max_c);
            let letters = (0..n).map(|_| random_letter(ctx, rng)).collect::<Result<Vec<_>, _>>()?;
            Ok(parse_path(letters, ctx).ok())
        };
        let (Some(r), Some(r2)) = (side(&mut rng)?, side(&mut rng)?) else {
            out.redraws += 1;
            continue;
        };
        let e = ctx.product([&r.label_element(ctx)?, &q.label_element(ctx)?, &r2.label_element(ctx)?])?;
        let q2 = SyllablePath::raw(ctx.inverse(&e).0);
        if !check_w_membership(&q2, 0, ctx)? {
            out.redraws += 1;
            continue;
        }
        let rep = regularity_audit(ctx, &r, &q, &r2, &q2)?;
        out.part_a_failures += (!rep.part_a()) as usize;
        out.part_b_failures += (!rep.part_b()) as usize;
        out.pairing_violations += rep.pairing_violations;
        out.backtracking += rep.backtracking;
        out.irregular_total += rep.irregular_q + rep.irregular_q_prime;
        done += 1;
    }
    Ok(out)
}
