//! Horace-method machinery: residual/trace splits, the lemmas on fat
//! points with coordinate supports, the certificate for the main theorem
//! and the arithmetic behind it.

mod appendix;
mod cert;
mod lemmas;
mod main_theorem;
mod profile;
mod split;

pub use appendix::{appendix_check, AppendixReport, AppendixRow, Violation, APPENDIX_MAX_N};
pub use cert::{CertificateNode, Relation, Rule, Status};
pub use lemmas::{
    fixed_component_check, lemma_case, residue_lemma_check, residue_lemma_v2_check, residue_scheme, residue_v2_scheme,
    substitution_check, substitution_instance, trace_lemma_check, trace_scheme, FixedComponentReport, LemmaInstance,
    LemmaKind, LemmaReport, ResidueV2Report, SubstitutionReport, MAX_LEMMA_M,
};
pub use main_theorem::{main_theorem_certify, Certificate, CertifyOptions, DEFAULT_DIRECT_CAP, MAX_CERTIFY_N};
pub use profile::{Branch, ParameterProfile};
pub use split::{
    castelnuovo_bound, fuzz_instance, lemzero_bound, lemzero_split, random_scheme, CastelnuovoReport, FuzzOutcome,
    LemzeroReport, LemzeroSplit,
};
