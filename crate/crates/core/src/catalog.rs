//! Catalog of named congruence families.
//!
//! Each family implements [`CongruenceFamily`] and is registered by name, so
//! callers (notably the CLI) can pick one at runtime. Families with parameters
//! receive them as an uninterpreted string and do their own parsing.

use crate::arc::{all_arcs, mask_values, Arc, ValSet};
use crate::birational::{birational_congruence, BirationalSequence};
use crate::error::{Error, Result};
use crate::ideal::ArcIdeal;
use std::fmt;
use std::str::FromStr;

/// One mark of a permutree decoration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mark {
    None,
    UpBarrier,
    DownBarrier,
    Both,
}

impl Mark {
    fn blocks_above(self) -> bool {
        matches!(self, Mark::UpBarrier | Mark::Both)
    }

    fn blocks_below(self) -> bool {
        matches!(self, Mark::DownBarrier | Mark::Both)
    }
}

/// A permutree decoration: one mark per point of `[n]`.
///
/// Text form is one character per point: `-` none, `u` up barrier (arcs may
/// not pass above the point), `d` down barrier, `b` both.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decoration {
    marks: Vec<Mark>,
}

impl Decoration {
    pub fn new(marks: Vec<Mark>) -> Self {
        Decoration { marks }
    }

    pub fn n(&self) -> usize {
        self.marks.len()
    }

    pub fn marks(&self) -> &[Mark] {
        &self.marks
    }

    /// Mask of points that no arc may pass above.
    pub fn up_barriers(&self) -> ValSet {
        self.mask(Mark::blocks_above)
    }

    /// Mask of points that no arc may pass below.
    pub fn down_barriers(&self) -> ValSet {
        self.mask(Mark::blocks_below)
    }

    fn mask(&self, pred: fn(Mark) -> bool) -> ValSet {
        self.marks
            .iter()
            .enumerate()
            .filter(|&(_, &m)| pred(m))
            .fold(0, |acc, (k, _)| acc | (1 << k))
    }
}

impl fmt::Display for Decoration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for m in &self.marks {
            let c = match m {
                Mark::None => '-',
                Mark::UpBarrier => 'u',
                Mark::DownBarrier => 'd',
                Mark::Both => 'b',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for Decoration {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let marks = s
            .trim()
            .chars()
            .enumerate()
            .map(|(k, c)| match c {
                '-' => Ok(Mark::None),
                'u' => Ok(Mark::UpBarrier),
                'd' => Ok(Mark::DownBarrier),
                'b' => Ok(Mark::Both),
                _ => Err(Error::parse(k, format!("invalid decoration mark `{c}`"))),
            })
            .collect::<Result<_>>()?;
        Ok(Decoration { marks })
    }
}

fn filtered(n: usize, keep: impl Fn(&Arc) -> bool) -> ArcIdeal {
    let allowed = all_arcs(n).into_iter().filter(keep).collect();
    // every family below keeps a subarc-closed predicate, but verify anyway
    ArcIdeal::new(n, allowed).expect("catalog predicate must be downward closed")
}

pub fn trivial(n: usize) -> ArcIdeal {
    ArcIdeal::trivial(n)
}

/// Up arcs only: the congruence of the Tamari lattice.
pub fn sylvester(n: usize) -> ArcIdeal {
    filtered(n, Arc::is_up)
}

pub fn antisylvester(n: usize) -> ArcIdeal {
    filtered(n, Arc::is_down)
}

/// Basic arcs only.
pub fn recoil(n: usize) -> ArcIdeal {
    filtered(n, Arc::is_basic)
}

/// Downward closure of a single arc.
pub fn cambrian(n: usize, alpha: Arc) -> Result<ArcIdeal> {
    if alpha.right() as usize > n {
        return Err(Error::InvalidParams {
            name: "cambrian".into(),
            reason: format!("arc {alpha} does not fit on [{n}]"),
        });
    }
    Ok(ArcIdeal::from_allowed(n, [alpha]))
}

/// Arcs respecting the barriers of a decoration.
pub fn permutree(n: usize, delta: &Decoration) -> Result<ArcIdeal> {
    if delta.n() != n {
        return Err(Error::InvalidParams {
            name: "permutree".into(),
            reason: format!("decoration has length {}, expected {n}", delta.n()),
        });
    }
    let up = delta.up_barriers();
    let down = delta.down_barriers();
    Ok(filtered(n, |a| {
        a.above() & up == 0 && a.below() & down == 0
    }))
}

/// `true` iff the mask contains `run` consecutive values.
fn has_consecutive_run(mask: ValSet, run: usize) -> bool {
    if run == 0 {
        return true;
    }
    let mut m = mask;
    for _ in 1..run {
        m &= m >> 1;
    }
    m != 0
}

/// Arcs passing above fewer than `b` consecutive points and below fewer than
/// `a` consecutive points.
pub fn sashes(n: usize, a: usize, b: usize) -> Result<ArcIdeal> {
    if a < 1 || b < 1 {
        return Err(Error::InvalidParams {
            name: "sashes".into(),
            reason: "parameters must be >= 1".into(),
        });
    }
    Ok(filtered(n, |arc| {
        !has_consecutive_run(arc.below(), a) && !has_consecutive_run(arc.above(), b)
    }))
}

/// Arcs that do not cross the horizontal axis (up arcs and down arcs).
pub fn baxter(n: usize) -> ArcIdeal {
    filtered(n, |a| a.is_up() || a.is_down())
}

fn is_interval(mask: ValSet) -> bool {
    if mask == 0 {
        return true;
    }
    let shifted = mask >> mask.trailing_zeros();
    shifted & (shifted + 1) == 0
}

/// Arcs crossing the horizontal axis at most once: both sides are intervals.
pub fn genrect(n: usize) -> ArcIdeal {
    filtered(n, |a| is_interval(a.above()) && is_interval(a.below()))
}

/// Arcs of length at most `p`.
pub fn precoil(n: usize, p: usize) -> Result<ArcIdeal> {
    if p < 1 {
        return Err(Error::InvalidParams {
            name: "precoil".into(),
            reason: "p must be >= 1".into(),
        });
    }
    Ok(filtered(n, |a| (a.right() - a.left()) as usize <= p))
}

/// Arcs passing below at most `p` points.
pub fn ptwist(n: usize, p: usize) -> ArcIdeal {
    filtered(n, |a| a.below().count_ones() as usize <= p)
}

/// A named congruence family selectable at runtime.
pub trait CongruenceFamily: Sync {
    fn name(&self) -> &'static str;

    /// Short description of the expected `params` string, if any.
    fn params_help(&self) -> Option<&'static str> {
        None
    }

    fn build(&self, n: usize, params: Option<&str>) -> Result<ArcIdeal>;
}

fn no_params(name: &'static str, params: Option<&str>) -> Result<()> {
    match params {
        None => Ok(()),
        Some(p) => Err(Error::InvalidParams {
            name: name.into(),
            reason: format!("takes no parameters, got `{p}`"),
        }),
    }
}

fn require_params<'a>(name: &'static str, params: Option<&'a str>) -> Result<&'a str> {
    params.ok_or_else(|| Error::InvalidParams {
        name: name.into(),
        reason: "parameters required".into(),
    })
}

fn parse_usize(name: &'static str, s: &str) -> Result<usize> {
    s.trim().parse().map_err(|_| Error::InvalidParams {
        name: name.into(),
        reason: format!("expected an integer, got `{s}`"),
    })
}

macro_rules! plain_family {
    ($ty:ident, $name:literal, $ctor:path) => {
        struct $ty;
        impl CongruenceFamily for $ty {
            fn name(&self) -> &'static str {
                $name
            }
            fn build(&self, n: usize, params: Option<&str>) -> Result<ArcIdeal> {
                no_params($name, params)?;
                Ok($ctor(n))
            }
        }
    };
}

plain_family!(TrivialFamily, "trivial", trivial);
plain_family!(SylvesterFamily, "sylvester", sylvester);
plain_family!(AntisylvesterFamily, "antisylvester", antisylvester);
plain_family!(RecoilFamily, "recoil", recoil);
plain_family!(BaxterFamily, "baxter", baxter);
plain_family!(GenrectFamily, "genrect", genrect);

struct CambrianFamily;
impl CongruenceFamily for CambrianFamily {
    fn name(&self) -> &'static str {
        "cambrian"
    }
    fn params_help(&self) -> Option<&'static str> {
        Some("an arc, e.g. `arc(1,4;A=2;B=3)`")
    }
    fn build(&self, n: usize, params: Option<&str>) -> Result<ArcIdeal> {
        let alpha: Arc = require_params("cambrian", params)?.parse()?;
        cambrian(n, alpha)
    }
}

struct PermutreeFamily;
impl CongruenceFamily for PermutreeFamily {
    fn name(&self) -> &'static str {
        "permutree"
    }
    fn params_help(&self) -> Option<&'static str> {
        Some("a decoration, one of `-udb` per point, e.g. `-ud-`")
    }
    fn build(&self, n: usize, params: Option<&str>) -> Result<ArcIdeal> {
        let delta: Decoration = require_params("permutree", params)?.parse()?;
        permutree(n, &delta)
    }
}

struct SashesFamily;
impl CongruenceFamily for SashesFamily {
    fn name(&self) -> &'static str {
        "sashes"
    }
    fn params_help(&self) -> Option<&'static str> {
        Some("two integers `a,b`")
    }
    fn build(&self, n: usize, params: Option<&str>) -> Result<ArcIdeal> {
        let raw = require_params("sashes", params)?;
        let parts: Vec<&str> = raw.split(',').collect();
        if parts.len() != 2 {
            return Err(Error::InvalidParams {
                name: "sashes".into(),
                reason: format!("expected `a,b`, got `{raw}`"),
            });
        }
        sashes(
            n,
            parse_usize("sashes", parts[0])?,
            parse_usize("sashes", parts[1])?,
        )
    }
}

struct PrecoilFamily;
impl CongruenceFamily for PrecoilFamily {
    fn name(&self) -> &'static str {
        "precoil"
    }
    fn params_help(&self) -> Option<&'static str> {
        Some("an integer p >= 1")
    }
    fn build(&self, n: usize, params: Option<&str>) -> Result<ArcIdeal> {
        precoil(n, parse_usize("precoil", require_params("precoil", params)?)?)
    }
}

struct PtwistFamily;
impl CongruenceFamily for PtwistFamily {
    fn name(&self) -> &'static str {
        "ptwist"
    }
    fn params_help(&self) -> Option<&'static str> {
        Some("an integer p >= 0")
    }
    fn build(&self, n: usize, params: Option<&str>) -> Result<ArcIdeal> {
        Ok(ptwist(
            n,
            parse_usize("ptwist", require_params("ptwist", params)?)?,
        ))
    }
}

struct BirationalFamily;
impl CongruenceFamily for BirationalFamily {
    fn name(&self) -> &'static str {
        "birational"
    }
    fn params_help(&self) -> Option<&'static str> {
        Some("a birational sequence, e.g. `((0,0),(1/2,1),(0,0))`")
    }
    fn build(&self, n: usize, params: Option<&str>) -> Result<ArcIdeal> {
        let seq: BirationalSequence = require_params("birational", params)?.parse()?;
        if seq.n() != n {
            return Err(Error::SizeMismatch {
                expected: n,
                got: seq.n(),
            });
        }
        birational_congruence(&seq)
    }
}

static REGISTRY: &[&dyn CongruenceFamily] = &[
    &TrivialFamily,
    &SylvesterFamily,
    &AntisylvesterFamily,
    &RecoilFamily,
    &CambrianFamily,
    &PermutreeFamily,
    &SashesFamily,
    &BaxterFamily,
    &GenrectFamily,
    &PrecoilFamily,
    &PtwistFamily,
    &BirationalFamily,
];

/// All registered families, in catalog order.
pub fn registry() -> &'static [&'static dyn CongruenceFamily] {
    REGISTRY
}

pub fn lookup(name: &str) -> Result<&'static dyn CongruenceFamily> {
    REGISTRY
        .iter()
        .find(|f| f.name() == name)
        .copied()
        .ok_or_else(|| Error::UnknownCongruence(name.into()))
}

/// Builds a catalog ideal by name.
pub fn build(name: &str, n: usize, params: Option<&str>) -> Result<ArcIdeal> {
    lookup(name)?.build(n, params)
}

#[allow(dead_code)]
fn debug_mask(mask: ValSet) -> Vec<u8> {
    mask_values(mask)
}
