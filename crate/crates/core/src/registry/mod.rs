//! The compiled catalog of concrete ensembles: each entry fixes a group
//! action, an ambient manifold with a density, and a slice.

mod common;
mod complex2;
mod family;
pub mod group;
mod real2;
mod spectral;
mod sphere;
mod unitary;

use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{DenseMatrix, RngStream};
use crate::tol::Tolerances;

pub(crate) use family::Family;
pub use family::HistogramLayout;
pub use group::GroupKind;
pub use real2::{discriminant, Branch};

use complex2::ComplexRankOne;
use real2::RealRankOne;
use spectral::SpectralFamily;
use sphere::SphereFamily;
use unitary::UnitaryFamily;

/// How many regular points [`EnsembleInstance::sample_regular_slice`] may reject in a row.
const MAX_REJECTIONS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnsembleClass {
    Linear,
    NonlinearNoncompact,
    Compact,
    GroupCompact,
    AlgebraCompact,
    GroupComplex,
    AlgebraComplex,
    PseudoGroup,
    PseudoAlgebra,
}

/// A point of X tagged with its instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmbientPoint {
    pub instance_id: String,
    /// The sphere's points are stored as 3×1 columns.
    pub value: DenseMatrix,
}

/// A point of Y in slice coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlicePoint {
    pub instance_id: String,
    pub coords: Vec<f64>,
    pub canonical: bool,
}

/// Either kind of point, for [`EnsembleInstance::regularity_gap`].
#[derive(Debug, Clone, Copy)]
pub enum PointRef<'a> {
    Ambient(&'a DenseMatrix),
    Slice(&'a [f64]),
}

/// An ambient tangent vector together with its coordinates in the instance's
/// orthonormal frame of `T_yX`.
#[derive(Debug, Clone, Serialize)]
pub struct TangentVector {
    pub raw: DenseMatrix,
    pub coords: Vec<f64>,
}

/// Catalog row as dumped by `list`.
#[derive(Debug, Clone, Serialize)]
pub struct InstanceSummary {
    pub id: String,
    pub class: EnsembleClass,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub branch: Option<Branch>,
    pub group_dim: usize,
    pub ambient_dim: usize,
    pub slice_dim: usize,
    pub stabilizer_dim: usize,
    pub d: usize,
    pub beta: Option<u32>,
    pub harness_eligible: bool,
}

#[derive(Clone)]
pub struct EnsembleInstance {
    pub id: String,
    pub ensemble_class: EnsembleClass,
    pub n: usize,
    pub branch: Option<Branch>,
    pub group_dim: usize,
    pub ambient_dim: usize,
    pub slice_dim: usize,
    pub stabilizer_dim: usize,
    pub expected_degree: usize,
    pub beta: Option<u32>,
    pub harness_eligible: bool,
    family: Arc<dyn Family>,
}

impl fmt::Debug for EnsembleInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EnsembleInstance")
            .field("id", &self.id)
            .field("class", &self.ensemble_class)
            .field("d", &self.expected_degree)
            .finish_non_exhaustive()
    }
}

struct Entry {
    id: String,
    class: EnsembleClass,
    n: usize,
    branch: Option<Branch>,
    d: usize,
    beta: Option<u32>,
    eligible: bool,
}

impl EnsembleInstance {
    fn register(entry: Entry, family: Arc<dyn Family>) -> Self {
        let group_dim = family.group().dim();
        Self {
            id: entry.id,
            ensemble_class: entry.class,
            n: entry.n,
            branch: entry.branch,
            group_dim,
            ambient_dim: family.frame().dim(),
            slice_dim: family.probe_slice().len(),
            stabilizer_dim: family.stabilizer_basis().len(),
            expected_degree: entry.d,
            beta: entry.beta,
            harness_eligible: entry.eligible,
            family,
        }
    }

    /// A copy of this instance registered with a different covering degree.
    /// Exists so that test fixtures can exercise the failure paths.
    pub fn with_expected_degree(&self, id: &str, d: usize) -> Self {
        Self { id: id.to_string(), expected_degree: d, ..self.clone() }
    }

    pub(crate) fn family(&self) -> &dyn Family {
        self.family.as_ref()
    }

    pub fn summary(&self) -> InstanceSummary {
        InstanceSummary {
            id: self.id.clone(),
            class: self.ensemble_class,
            n: self.n,
            branch: self.branch,
            group_dim: self.group_dim,
            ambient_dim: self.ambient_dim,
            slice_dim: self.slice_dim,
            stabilizer_dim: self.stabilizer_dim,
            d: self.expected_degree,
            beta: self.beta,
            harness_eligible: self.harness_eligible,
        }
    }

    pub fn group(&self) -> GroupKind {
        self.family.group()
    }

    pub fn require_group_element(&self, g: &DenseMatrix, tol: &Tolerances) -> Result<()> {
        let r = self.group().membership_residual(g);
        if r <= tol.structural {
            Ok(())
        } else {
            Err(Error::NotGroupElement(r))
        }
    }

    /// σ_g(x), after checking that `g` is a group element.
    pub fn act(&self, g: &DenseMatrix, x: &DenseMatrix, tol: &Tolerances) -> Result<DenseMatrix> {
        self.require_group_element(g, tol)?;
        Ok(self.family.act(g, x))
    }

    pub(crate) fn act_unchecked(&self, g: &DenseMatrix, x: &DenseMatrix) -> DenseMatrix {
        self.family.act(g, x)
    }

    pub fn embed(&self, y: &[f64]) -> DenseMatrix {
        self.family.embed(y)
    }

    /// Slice coordinates of a point on Y.
    pub fn slice_coords(&self, x: &DenseMatrix) -> Vec<f64> {
        self.family.slice_coords(x)
    }

    /// Distance of an ambient point from Y.
    pub fn dist_to_slice(&self, x: &DenseMatrix) -> f64 {
        self.family.dist_to_slice(x)
    }

    pub fn slice_point(&self, coords: Vec<f64>) -> SlicePoint {
        let canonical = self.family.is_canonical(&coords);
        SlicePoint { instance_id: self.id.clone(), coords, canonical }
    }

    pub fn ambient_point(&self, value: DenseMatrix) -> AmbientPoint {
        AmbientPoint { instance_id: self.id.clone(), value }
    }

    pub fn is_canonical(&self, y: &[f64]) -> bool {
        self.family.is_canonical(y)
    }

    /// Distance between slice coordinates (circular for angles).
    pub fn coord_distance(&self, a: &[f64], b: &[f64]) -> f64 {
        self.family.coord_distance(a, b)
    }

    /// Distance from the manifold X.
    pub fn ambient_residual(&self, x: &DenseMatrix) -> f64 {
        self.family.ambient_residual(x)
    }

    /// One preimage `(g, y)` of `x` under φ with `y` canonical.
    pub fn decompose(&self, x: &DenseMatrix, tol: &Tolerances) -> Result<(DenseMatrix, SlicePoint)> {
        let r = self.family.ambient_residual(x);
        if r > tol.structural {
            return Err(Error::Shape(format!("point is not in X for {} (residual {r:.3e})", self.id)));
        }
        let (g, y) = self.family.decompose(x, tol).map_err(|e| match e {
            Error::DegenerateSpectrum(gap) => Error::NotRegular(gap),
            other => other,
        })?;
        let gap = self.family.slice_gap(&y);
        if gap <= tol.degeneracy {
            return Err(Error::NotRegular(gap));
        }
        let back = self.family.act(&g, &self.family.embed(&y));
        let residual = back.sub(x).frobenius();
        if residual > tol.fiber_residual * x.frobenius().max(1.0) {
            return Err(Error::Reconstruction(residual));
        }
        Ok((g, self.slice_point(y)))
    }

    /// Minimum absolute root-function value at the point; 0 off the regular set.
    pub fn regularity_gap(&self, point: PointRef<'_>, tol: &Tolerances) -> f64 {
        match point {
            PointRef::Slice(y) => self.family.slice_gap(y),
            PointRef::Ambient(x) => match self.family.decompose(x, tol) {
                Ok((_, y)) => self.family.slice_gap(&y),
                Err(_) => 0.0,
            },
        }
    }

    pub fn require_regular(&self, y: &[f64], tol: &Tolerances) -> Result<()> {
        let gap = self.family.slice_gap(y);
        if gap > tol.degeneracy {
            Ok(())
        } else {
            Err(Error::NotRegular(gap))
        }
    }

    /// Orthonormal basis of the complement of Lie(K) in Lie(G).
    pub fn transversal_basis(&self) -> Vec<DenseMatrix> {
        self.family.transversal_basis()
    }

    /// Orthonormal basis of Lie(K).
    pub fn stabilizer_basis(&self) -> Vec<DenseMatrix> {
        self.family.stabilizer_basis()
    }

    /// Image of `ξ` under the differential of the action at `x`.
    pub fn orbit_derivative(&self, xi: &DenseMatrix, x: &DenseMatrix) -> DenseMatrix {
        self.family.orbit_derivative(xi, x)
    }

    /// Coordinates of a tangent vector at `x` in the orthonormal frame.
    pub fn tangent_coords(&self, x: &DenseMatrix, v: &DenseMatrix) -> Vec<f64> {
        self.family.tangent_coords(x, v)
    }

    fn tangent(&self, at: &DenseMatrix, raw: DenseMatrix) -> TangentVector {
        let coords = self.family.tangent_coords(at, &raw);
        TangentVector { raw, coords }
    }

    /// Spanning set of `T_yO_y`: images of [`Self::transversal_basis`].
    pub fn orbit_tangent_basis(&self, y: &[f64], tol: &Tolerances) -> Result<Vec<TangentVector>> {
        self.require_regular(y, tol)?;
        let at = self.embed(y);
        Ok(self
            .family
            .transversal_basis()
            .iter()
            .map(|xi| self.tangent(&at, self.family.orbit_derivative(xi, &at)))
            .collect())
    }

    /// Orthonormal basis of `T_yY`.
    pub fn slice_tangent_basis(&self, y: &[f64], tol: &Tolerances) -> Result<Vec<TangentVector>> {
        self.require_regular(y, tol)?;
        let at = self.embed(y);
        Ok(self.family.slice_tangents(y).into_iter().map(|v| self.tangent(&at, v)).collect())
    }

    /// Unnormalized invariant density.
    pub fn density_at(&self, x: &DenseMatrix, tol: &Tolerances) -> f64 {
        self.family.density(x, tol)
    }

    /// Declared root product V(y), if any.
    pub fn root_product(&self, y: &[f64]) -> Option<f64> {
        self.family.root_product(y)
    }

    pub fn histogram_layout(&self) -> Option<HistogramLayout> {
        self.family.histogram()
    }

    /// Distance of `g⁻¹h` from K; zero iff `[g] = [h]` in G/K.
    pub fn coset_distance(&self, g: &DenseMatrix, h: &DenseMatrix, tol: &Tolerances) -> Result<f64> {
        self.require_group_element(g, tol)?;
        self.require_group_element(h, tol)?;
        Ok(self.coset_distance_unchecked(g, h))
    }

    pub(crate) fn coset_distance_unchecked(&self, g: &DenseMatrix, h: &DenseMatrix) -> f64 {
        self.family.stabilizer_distance(&self.group().inverse(g).matmul(h))
    }

    pub fn sample_stabilizer(&self, rng: &mut RngStream) -> DenseMatrix {
        self.family.sample_stabilizer(rng)
    }

    /// Draw from p(x)dx (conditioned on regularity for the noncompact instances).
    pub fn sample_ambient(&self, rng: &mut RngStream, tol: &Tolerances) -> Result<AmbientPoint> {
        Ok(self.ambient_point(self.family.sample(rng, tol)?))
    }

    /// A random regular canonical slice point: the canonical part of a
    /// regular draw from p.
    pub fn sample_regular_slice(&self, rng: &mut RngStream, tol: &Tolerances) -> Result<Vec<f64>> {
        for _ in 0..MAX_REJECTIONS {
            let x = self.family.sample(rng, tol)?;
            if let Ok((_, y)) = self.decompose(&x, tol) {
                return Ok(y.coords);
            }
        }
        Err(Error::RejectionOverflow(MAX_REJECTIONS))
    }
}

#[derive(Debug, Clone)]
pub struct Catalog {
    instances: Vec<EnsembleInstance>,
}

fn entry(id: &str, class: EnsembleClass, n: usize, d: usize, beta: Option<u32>, eligible: bool) -> Entry {
    Entry { id: id.to_string(), class, n, branch: None, d, beta, eligible }
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

impl Catalog {
    pub fn builtin() -> Self {
        use EnsembleClass::*;
        let mut v = Vec::new();
        for n in 2..=4 {
            v.push(EnsembleInstance::register(
                entry(&format!("lin-sym-O({n})"), Linear, n, factorial(n), Some(1), true),
                Arc::new(SpectralFamily::symmetric(n)),
            ));
        }
        for n in 2..=3 {
            v.push(EnsembleInstance::register(
                entry(&format!("nl-posdef-O({n})"), NonlinearNoncompact, n, factorial(n), Some(1), true),
                Arc::new(SpectralFamily::positive_definite(n)),
            ));
        }
        v.push(EnsembleInstance::register(entry("cpt-sphere", Compact, 1, 2, None, true), Arc::new(SphereFamily::new())));
        for n in 2..=3 {
            v.push(EnsembleInstance::register(
                entry(&format!("grp-U({n})"), GroupCompact, n, factorial(n), Some(2), true),
                Arc::new(UnitaryFamily::new(n)),
            ));
        }
        for n in 2..=3 {
            v.push(EnsembleInstance::register(
                entry(&format!("alg-u({n})"), AlgebraCompact, n, factorial(n), Some(2), true),
                Arc::new(SpectralFamily::hermitian(n)),
            ));
        }
        v.push(EnsembleInstance::register(entry("grp-SL2C", GroupComplex, 2, 2, None, false), Arc::new(ComplexRankOne::group())));
        v.push(EnsembleInstance::register(
            entry("alg-sl2C", AlgebraComplex, 2, 2, None, false),
            Arc::new(ComplexRankOne::algebra()),
        ));
        for (prefix, class, algebra) in [("pgrp-GL2R", PseudoGroup, false), ("palg-gl2R", PseudoAlgebra, true)] {
            for branch in [Branch::Split, Branch::Rotation] {
                let name = match branch {
                    Branch::Split => "split",
                    Branch::Rotation => "rotation",
                };
                let mut s = entry(&format!("{prefix}-{name}"), class, 2, 2, None, false);
                s.branch = Some(branch);
                v.push(EnsembleInstance::register(s, Arc::new(RealRankOne::new(algebra, branch))));
            }
        }
        Self { instances: v }
    }

    /// Shared copy of the compiled catalog.
    pub fn shared() -> &'static Catalog {
        static CATALOG: OnceLock<Catalog> = OnceLock::new();
        CATALOG.get_or_init(Catalog::builtin)
    }

    pub fn from_instances(instances: Vec<EnsembleInstance>) -> Self {
        Self { instances }
    }

    pub fn push(&mut self, instance: EnsembleInstance) {
        self.instances.push(instance);
    }

    pub fn iter(&self) -> impl Iterator<Item = &EnsembleInstance> {
        self.instances.iter()
    }

    pub fn ids(&self) -> Vec<&str> {
        self.instances.iter().map(|i| i.id.as_str()).collect()
    }

    /// Looks up an id; parentheses are optional (`lin-sym-O3` = `lin-sym-O(3)`).
    pub fn lookup(&self, id: &str) -> Result<&EnsembleInstance> {
        let key = normalize(id);
        self.instances
            .iter()
            .find(|i| i.id == id || normalize(&i.id) == key)
            .ok_or_else(|| Error::UnknownInstance(id.to_string()))
    }
}

fn normalize(id: &str) -> String {
    id.chars().filter(|c| *c != '(' && *c != ')').collect()
}

pub fn instance_lookup(id: &str) -> Result<EnsembleInstance> {
    Catalog::shared().lookup(id).cloned()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_has_all_entries_and_aliases() {
        let c = Catalog::builtin();
        assert_eq!(c.ids().len(), 16);
        assert_eq!(c.lookup("lin-sym-O3").unwrap().id, "lin-sym-O(3)");
        assert!(matches!(c.lookup("nosuch"), Err(Error::UnknownInstance(_))));
    }

    #[test]
    fn dimension_bookkeeping() {
        for inst in Catalog::builtin().iter() {
            assert_eq!(
                inst.ambient_dim,
                inst.group_dim - inst.stabilizer_dim + inst.slice_dim,
                "{}",
                inst.id
            );
        }
    }
}
