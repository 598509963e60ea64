//! Tilting generators as divisor-class data.
//!
//! A summand `(twist, support, shift)` stands for the sheaf `O_Z(twist)[shift]`
//! supported on the effective divisor `Z` (or on all of `X`). Only classes
//! are tracked: a twist is compared numerically along its support.

use serde::Serialize;

use super::{Basis, DivisorClass, ExceptionalLattice};
use crate::error::{Error, Result};
use crate::forest::{BlowupForest, Contraction};
use crate::poset::Subset;
use crate::scalar::Scalar;

/// Largest forest accepted by [`ExceptionalLattice::verify_generator_identities`].
pub const DEFAULT_IDENTITY_LIMIT: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Variant {
    /// `O(omega_X)` plus the discrepancy sheaves `O_{D_p}(omega_X)`.
    T,
    /// `O_X` plus `O_{D_p}(D_p)[-1]`.
    S,
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "T" | "t" => Ok(Variant::T),
            "S" | "s" => Ok(Variant::S),
            other => Err(Error::Parse(format!("unknown variant `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Support<T> {
    Whole,
    Divisor(DivisorClass<T>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Summand<T> {
    /// Node whose principal contraction produced the summand.
    pub generator: Option<String>,
    pub twist: DivisorClass<T>,
    pub support: Support<T>,
    pub shift: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FormalGenerator<T> {
    pub summands: Vec<Summand<T>>,
}

impl<T: Scalar> FormalGenerator<T> {
    /// Supports of the summands carried by exceptional divisors.
    pub fn exceptional_supports(&self) -> Vec<&DivisorClass<T>> {
        self.summands
            .iter()
            .filter_map(|s| match &s.support {
                Support::Divisor(d) => Some(d),
                Support::Whole => None,
            })
            .collect()
    }

    pub fn supports_effective(&self) -> bool {
        self.exceptional_supports().iter().all(|d| d.is_effective())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityFailure {
    pub check: &'static str,
    pub g: Vec<String>,
    pub other: Vec<String>,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub checked: usize,
    pub failures: Vec<IdentityFailure>,
}

impl IdentityReport {
    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }

    fn record(&mut self, ok: bool, check: &'static str, g: Vec<String>, other: Vec<String>, detail: String) {
        self.checked += 1;
        if !ok {
            self.failures.push(IdentityFailure {
                check,
                g,
                other,
                detail,
            });
        }
    }
}

fn ids(forest: &BlowupForest, s: Subset) -> Vec<String> {
    s.iter().map(|i| forest.id(i).to_owned()).collect()
}

impl<T: Scalar> ExceptionalLattice<T> {
    /// The generator of the given variant for the contraction `g`.
    pub fn tilting_generator(&self, g: &Contraction<'_>, variant: Variant) -> Result<FormalGenerator<T>> {
        self.check_contraction(g)?;
        let n = self.len();
        let mut summands = Vec::with_capacity(g.contracted().len() + 1);
        let omega = self.relative_canonical(&self.forest().full())?;
        summands.push(Summand {
            generator: None,
            twist: match variant {
                Variant::T => omega.clone(),
                Variant::S => DivisorClass::zero(n, Basis::Strict),
            },
            support: Support::Whole,
            shift: 0,
        });
        for p in g.contracted().iter() {
            let d = self.discrepancy(self.forest().descendants(p))?;
            let (twist, shift) = match variant {
                Variant::T => (omega.clone(), 0),
                Variant::S => (d.clone(), -1),
            };
            summands.push(Summand {
                generator: Some(self.forest().id(p).to_owned()),
                twist,
                support: Support::Divisor(d),
                shift,
            });
        }
        Ok(FormalGenerator { summands })
    }

    /// Pushes `gen` forward along `g`. Summands generated inside `g` vanish;
    /// the rest keep their generator, now read on the residual forest.
    pub fn pushforward_generator(
        &self,
        g: &Contraction<'_>,
        gen: &FormalGenerator<T>,
    ) -> Result<(ExceptionalLattice<T>, FormalGenerator<T>)> {
        self.check_contraction(g)?;
        let (_, fh) = g.factor();
        let residual = ExceptionalLattice::new(&fh);
        let pushed = self.pushforward_generator_to(g.contracted(), gen, &residual)?;
        Ok((residual, pushed))
    }

    fn pushforward_generator_to(
        &self,
        contracted: Subset,
        gen: &FormalGenerator<T>,
        residual: &ExceptionalLattice<T>,
    ) -> Result<FormalGenerator<T>> {
        let mut summands = Vec::new();
        for s in &gen.summands {
            if let Some(p) = &s.generator {
                if contracted.contains(self.forest().index_of(p)?) {
                    continue;
                }
            }
            summands.push(Summand {
                generator: s.generator.clone(),
                twist: self.pushforward(contracted, &s.twist, residual)?,
                support: match &s.support {
                    Support::Whole => Support::Whole,
                    Support::Divisor(d) => Support::Divisor(self.pushforward(contracted, d, residual)?),
                },
                shift: s.shift,
            });
        }
        Ok(FormalGenerator { summands })
    }

    /// `(expected - actual) . E_j = 0` for every component `j` of `support`.
    fn twists_agree(
        &self,
        expected: &DivisorClass<T>,
        actual: &DivisorClass<T>,
        support: &DivisorClass<T>,
    ) -> Result<bool> {
        let diff = self.to_total(expected)?.sub(&self.to_total(actual)?);
        let pairings = self.component_pairings(&diff)?;
        let support = self.to_strict(support)?;
        Ok((0..self.len()).all(|j| !support.coeffs[j].is_positive() || pairings[j].is_zero()))
    }

    /// Checks the class identities behind the short exact sequences relating
    /// discrepancy sheaves, and the pushforward of the `T` generator, over
    /// all of `Dec(f)`.
    pub fn verify_generator_identities(&self) -> Result<IdentityReport> {
        let forest = self.forest().clone();
        if forest.len() > DEFAULT_IDENTITY_LIMIT {
            return Err(Error::SizeLimit {
                what: "forest nodes",
                size: forest.len(),
                limit: DEFAULT_IDENTITY_LIMIT,
            });
        }
        let all = forest.all();
        let dec = forest.dec_lattice()?;
        let elements: Vec<Subset> = dec.elements().to_vec();
        let residuals: Vec<ExceptionalLattice<T>> = elements
            .iter()
            .map(|&g| ExceptionalLattice::new(&forest.induced(all.difference(g))))
            .collect();
        let discrepancies: Vec<DivisorClass<T>> = elements
            .iter()
            .map(|&g| self.discrepancy(g))
            .collect::<Result<_>>()?;
        let omega_x = self.discrepancy(all)?;
        let full_t = self.tilting_generator(&forest.full(), Variant::T)?;
        let mut report = IdentityReport::default();

        for (gi, &g) in elements.iter().enumerate() {
            let d_g = &discrepancies[gi];
            for (hi, &g_sub) in elements.iter().enumerate() {
                if !g_sub.is_subset(g) {
                    continue;
                }
                let d_sub = &discrepancies[hi];
                let z = &residuals[hi];
                let rest = Subset::from_indices(
                    all.difference(g_sub)
                        .iter()
                        .enumerate()
                        .filter(|&(_, i)| g.contains(i))
                        .map(|(k, _)| k),
                );
                let d_h = z.discrepancy(rest)?;
                let pulled = self.pullback(g_sub, z, &d_h)?;
                let label = || (ids(&forest, g), ids(&forest, g_sub));

                // Embedding O_{D_g'}(omega_g') -> O_{D_g}(omega_g) -> g'^* O_{D_h'}(omega_h').
                let sum = d_sub.add(&pulled);
                let (a, b) = label();
                report.record(
                    sum == *d_g,
                    "embed-class",
                    a,
                    b,
                    format!("{} != {}", sum.display(&forest), d_g.display(&forest)),
                );
                let (a, b) = label();
                report.record(
                    self.twists_agree(d_sub, &d_g.sub(&pulled), d_sub)?,
                    "embed-sub-twist",
                    a,
                    b,
                    String::new(),
                );
                let (a, b) = label();
                report.record(
                    self.twists_agree(&pulled.add(d_sub), d_g, &pulled)?,
                    "embed-quotient-twist",
                    a,
                    b,
                    String::new(),
                );

                // Restriction g'^* O_{D_h'}(omega_{h h'}) -> O_{D_g}(omega_f) -> O_{D_g'}(omega_f).
                let omega_z = self.pullback(g_sub, z, &z.discrepancy(z.forest().all())?)?;
                let (a, b) = label();
                report.record(
                    self.twists_agree(&omega_z, &omega_x.sub(d_sub), &pulled)?,
                    "epi-sub-twist",
                    a,
                    b,
                    String::new(),
                );
            }

            // Pull-back sequences for the summands of T outside g.
            let z = &residuals[gi];
            let omega_z = self.pullback(g, z, &z.discrepancy(z.forest().all())?)?;
            let gamma = forest.contraction(g)?.gamma(z.forest());
            for p in all.difference(g).iter() {
                let down = forest.descendants(p);
                let phi = gamma[forest.id(p)];
                let d_p = self.discrepancy(down)?;
                let d_phi = self.pullback(g, z, &z.discrepancy(phi)?)?;
                let d_meet = self.discrepancy(g.intersection(down))?;
                let label = || (ids(&forest, g), vec![forest.id(p).to_owned()]);
                let (a, b) = label();
                let sum = d_phi.add(&d_meet);
                report.record(
                    sum == d_p,
                    "pullback-class",
                    a,
                    b,
                    format!("{} != {}", sum.display(&forest), d_p.display(&forest)),
                );
                let (a, b) = label();
                report.record(
                    self.twists_agree(&omega_z, &omega_x.sub(&d_meet), &d_phi)?,
                    "pullback-sub-twist",
                    a,
                    b,
                    String::new(),
                );
            }

            // Pushforward of T_{X,f} along g.
            let pushed = self.pushforward_generator_to(g, &full_t, z)?;
            let expected = z.tilting_generator(&z.forest().full(), Variant::T)?;
            report.record(
                pushed == expected,
                "pushforward",
                ids(&forest, g),
                Vec::new(),
                format!("{} summands, expected {}", pushed.summands.len(), expected.summands.len()),
            );
            report.record(
                full_t.supports_effective(),
                "effective-supports",
                ids(&forest, g),
                Vec::new(),
                String::new(),
            );
        }
        Ok(report)
    }
}
