use crate::algebra::Diagnostic;
use crate::model::{show_set, Atom, AtomSet};
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the library can report.
///
/// The CLI prints these as `error: <Kind>: <detail>` where `<Kind>` is
/// [`Error::kind`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("input, output and hidden signatures overlap on {}", show_set(.atoms))]
    OverlappingSignature { atoms: AtomSet },
    #[error("atom {atom} of rule `{rule}` is not declared in the signature")]
    ForeignAtom { atom: Atom, rule: String },
    #[error("rule `{rule}` has a non-empty head made of input atoms only")]
    InputOnlyHead { rule: String },
    #[error("atom {atom} uses the reserved prefix `@`")]
    ReservedAtom { atom: Atom },
    #[error("interpretation atoms {} are outside the signature", show_set(.atoms))]
    OutOfSignature { atoms: AtomSet },
    #[error("renaming would clash on atom {atom}")]
    NameClash { atom: Atom },
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: atom {atom} is not declared by any directive")]
    UndeclaredAtom { atom: Atom, line: usize },
    #[error("line {line}: directive #{directive} appears more than once")]
    DuplicateDirective { directive: String, line: usize },
    #[error("line {line}: atom {atom} is declared more than once")]
    DuplicateDeclaration { atom: Atom, line: usize },
    #[error("signature of {size} atoms exceeds the enumeration cap of {cap}")]
    SignatureTooLarge { size: usize, cap: usize },
    #[error("atoms {} are not input atoms", show_set(.atoms))]
    NotAnInput { atoms: AtomSet },
    #[error("strongly connected component {} has more than {cap} atoms", show_set(.component))]
    ComponentTooLarge { component: AtomSet, cap: usize },
    #[error("atom {atom} is not an output or hidden atom")]
    NotDefinedHere { atom: Atom },
    #[error("{} is not a loop", show_set(.atoms))]
    NotALoop { atoms: AtomSet },
    #[error("modules do not respect each other's interfaces: {}", show_diagnostics(.diagnostics))]
    InterfaceViolation { diagnostics: Vec<Diagnostic> },
    #[error("modules are mutually dependent through component {}", show_set(.component))]
    MutualDependence { component: AtomSet },
    #[error("atoms {} are not hidden", show_set(.atoms))]
    NotHidden { atoms: AtomSet },
    #[error("atoms {} are not output atoms", show_set(.atoms))]
    NotOutput { atoms: AtomSet },
    #[error("module has input or hidden atoms; splitting needs an ordinary program")]
    NotOrdinary,
    #[error("{} is not a splitting set", show_set(.set))]
    NotASplittingSet { set: AtomSet },
    #[error("modules have different interfaces: {detail}")]
    Incompatible { detail: String },
    #[error("module lacks enough visible atoms; hidden part fails on input {}", show_set(.counterexample))]
    NoEva { counterexample: AtomSet },
    #[error("line {line}: variable {variable} is not bound by its quantifier block")]
    BlockViolation { variable: String, line: usize },
    #[error("variable {variable} does not occur in any disjunct")]
    UnusedVariable { variable: String },
    #[error("variable {variable} collides with an atom used by the encoding")]
    ReservedVariable { variable: String },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

impl Error {
    /// Stable machine-readable name of the error kind.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::OverlappingSignature { .. } => "OverlappingSignature",
            Error::ForeignAtom { .. } => "ForeignAtom",
            Error::InputOnlyHead { .. } => "InputOnlyHead",
            Error::ReservedAtom { .. } => "ReservedAtom",
            Error::OutOfSignature { .. } => "OutOfSignature",
            Error::NameClash { .. } => "NameClash",
            Error::Syntax { .. } => "SyntaxError",
            Error::UndeclaredAtom { .. } => "UndeclaredAtom",
            Error::DuplicateDirective { .. } => "DuplicateDirective",
            Error::DuplicateDeclaration { .. } => "DuplicateDeclaration",
            Error::SignatureTooLarge { .. } => "SignatureTooLarge",
            Error::NotAnInput { .. } => "NotAnInput",
            Error::ComponentTooLarge { .. } => "ComponentTooLarge",
            Error::NotDefinedHere { .. } => "NotDefinedHere",
            Error::NotALoop { .. } => "NotALoop",
            Error::InterfaceViolation { .. } => "InterfaceViolation",
            Error::MutualDependence { .. } => "MutualDependence",
            Error::NotHidden { .. } => "NotHidden",
            Error::NotOutput { .. } => "NotOutput",
            Error::NotOrdinary => "NotOrdinary",
            Error::NotASplittingSet { .. } => "NotASplittingSet",
            Error::Incompatible { .. } => "Incompatible",
            Error::NoEva { .. } => "NoEva",
            Error::BlockViolation { .. } => "BlockViolation",
            Error::UnusedVariable { .. } => "UnusedVariable",
            Error::ReservedVariable { .. } => "ReservedVariable",
            Error::Io { .. } => "Io",
        }
    }
}

fn show_diagnostics(diagnostics: &[Diagnostic]) -> String {
    diagnostics
        .iter()
        .map(|d| d.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}
