//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum GroupError {
    #[error("image array {images:?} is not a permutation")]
    NotAPermutation { images: Vec<usize> },
    #[error("permutation degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("element enumeration exceeded cap of {cap}")]
    CapExceeded { cap: usize },
    #[error("element set is not closed under the group operations")]
    NotClosed,
    #[error("candidate element set is not a subgroup")]
    NotSubgroup,
    #[error("generator image count mismatch: expected {expected}, found {found}")]
    GeneratorCountMismatch { expected: usize, found: usize },
    #[error("generator image lies outside the target group")]
    ImageOutsideTarget,
    #[error("generator images do not extend to a homomorphism")]
    NotWellDefined,
    #[error("homomorphism is not bijective")]
    NotBijective,
}

#[derive(Debug, Error)]
pub enum ScwolError {
    #[error("unknown vertex id {0:?}")]
    UnknownVertex(String),
    #[error("unknown edge id {0:?}")]
    UnknownEdge(String),
    #[error("duplicate id {0:?}")]
    DuplicateId(String),
    #[error("face relation is not antisymmetric: cycle through {0:?}")]
    NotAntisymmetric(String),
    #[error("morphism must map edge {edge:?} to an edge of the target")]
    EdgeCannotMap { edge: String },
    #[error("morphism images missing for {0:?}")]
    MissingImage(String),
    #[error("scwol is not connected")]
    NotConnected,
    #[error("budget must be positive")]
    BadBudget,
}

#[derive(Debug, Error)]
pub enum FpError {
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("edge set is not a maximal tree: {reason}")]
    NotASpanningTree { reason: String },
    #[error("coset enumeration exceeded budget of {budget}")]
    Exceeded { budget: usize },
    #[error("relator {relator} fails under the given images")]
    RelatorFails { relator: String },
    #[error("word uses generator index {0} outside the presentation")]
    BadWord(usize),
}

#[derive(Debug, Error)]
pub enum ActionError {
    #[error("group error: {0}")]
    Group(#[from] GroupError),
    #[error("generator action is not a scwol automorphism: {0}")]
    NotAutomorphism(String),
    #[error("action maps are inconsistent with the group relations at element {0:?}")]
    Inconsistent(String),
    #[error(
        "action has inversions (witness g={witness_g:?} on {witness_cell:?}); \
         pass the barycentric subdivision instead"
    )]
    HasInversions {
        witness_g: Vec<usize>,
        witness_cell: String,
    },
    #[error("choice data invalid: {0}")]
    BadChoices(String),
    #[error("no element carries {from:?} to {to:?}")]
    NoCarrier { from: String, to: String },
}

#[derive(Debug, Error)]
pub enum CogError {
    #[error("scwol error: {0}")]
    Scwol(#[from] ScwolError),
    #[error("group error: {0}")]
    Group(#[from] GroupError),
    #[error("missing local group for vertex {0:?}")]
    MissingLocalGroup(String),
    #[error("missing edge homomorphism for edge {0:?}")]
    MissingEdgeHom(String),
    #[error("edge homomorphism for {0:?} must be injective")]
    EdgeHomNotInjective(String),
    #[error("twist for pair ({0:?}, {1:?}) lies outside the local group")]
    TwistOutsideGroup(String, String),
    #[error("morphism data does not match the underlying scwol morphism: {0}")]
    Mismatch(String),
}

#[derive(Debug, Error)]
pub enum DevError {
    #[error("cog error: {0}")]
    Cog(#[from] CogError),
    #[error("fp error: {0}")]
    Fp(#[from] FpError),
    #[error("group error: {0}")]
    Group(#[from] GroupError),
    #[error("action error: {0}")]
    Action(#[from] ActionError),
    #[error("morphism to group fails axiom: {0}")]
    BadMorphism(String),
    #[error("morphism is not injective on the local group at {0:?}")]
    NotInjectiveOnLocalGroups(String),
    #[error("operation requires a finite universal cover")]
    RequiresFiniteCover,
    #[error("developability certificate required but simple connectivity is {0}")]
    NotCertifiedSimplyConnected(String),
}

#[derive(Debug, Error)]
pub enum FunctorError {
    #[error("dev error: {0}")]
    Dev(#[from] DevError),
    #[error("cog error: {0}")]
    Cog(#[from] CogError),
    #[error("group error: {0}")]
    Group(#[from] GroupError),
    #[error("fp error: {0}")]
    Fp(#[from] FpError),
    #[error("action error: {0}")]
    Action(#[from] ActionError),
    #[error("scwol error: {0}")]
    Scwol(#[from] ScwolError),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("basepoint condition failed: expected L([1], {0}) to be ([1], -)")]
    BasepointConditionFailed(String),
    #[error("map is not equivariant: {0}")]
    NotEquivariant(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
}

#[derive(Debug, Error)]
pub enum BijError {
    #[error("functor error: {0}")]
    Functor(#[from] FunctorError),
    #[error("dev error: {0}")]
    Dev(#[from] DevError),
    #[error("action error: {0}")]
    Action(#[from] ActionError),
    #[error("group error: {0}")]
    Group(#[from] GroupError),
    #[error("cog error: {0}")]
    Cog(#[from] CogError),
    #[error("scwol error: {0}")]
    Scwol(#[from] ScwolError),
    #[error("overgroup must contain the base group")]
    NotOvergroup,
    #[error("covering target is not faithful (nontrivial kernel); see faithfulness criterion")]
    NotFaithful,
    #[error("gamma is not contained in the orbit-preserving overgroup")]
    NotInGH,
    #[error("gamma does not act freely: element {witness_g:?} fixes {witness_cell:?}")]
    NotFree {
        witness_g: Vec<usize>,
        witness_cell: String,
    },
}
