//! Embeddability verdicts, each tied to the result that decides it.

mod composition;
mod lfm;
mod realize;
mod toeplitz;
mod weighted;

use serde::{Deserialize, Serialize};

use crate::semigroups::Semiflow;
use crate::C64;

pub use composition::{decide_composition, singular_fixed_point};
pub use lfm::{decide_lfm, spiral_length, LfmCondition, SpiralData};
pub use realize::{realize, RealizeOptions};
pub use toeplitz::{decide_polynomial_toeplitz, decide_toeplitz};
pub use weighted::{build_weight, codimension_witness, verify_weighted_isometry, WeightedIsometryReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Embeddable,
    NotEmbeddable,
    Unknown,
    OutOfScope,
}

/// A governing result: short token plus its statement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Citation {
    pub token: &'static str,
    pub text: &'static str,
}

pub mod citations {
    use super::Citation;

    pub const THEOREM_1_1: Citation = Citation {
        token: "Theorem 1.1",
        text: "An isometry V on a Hilbert space H is embeddable into a C0-semigroup if and only if V is unitary or codim(VH) = ∞.",
    };
    pub const THEOREM_3_2: Citation = Citation {
        token: "Theorem 3.2",
        text: "Every composition operator C_φ which is similar to an isometry on H² is embeddable into a C0-semigroup (T_t)_{t≥0} on H², which is not a semigroup of composition operators, unless φ is an automorphism.",
    };
    pub const ELLIPTIC_FLOW: Citation = Citation {
        token: "Equation (2.1)",
        text: "φ = τ_α ∘ R_θ ∘ τ_α is embeddable into the semiflow φ_t = τ_α ∘ R_{θt} ∘ τ_α.",
    };
    pub const BAYART: Citation = Citation {
        token: "Bayart characterization",
        text: "C_φ is similar to an isometry on H² if and only if φ is inner and there exists α ∈ 𝔻 such that φ(α) = α.",
    };
    pub const AUTOMORPHISM_FLOWS: Citation = Citation {
        token: "Remark on semiflows",
        text: "If φ ↪ (φ_t) where (φ_t) is a semiflow of analytic self-maps of 𝔻, then C_φ ↪ (C_{φ_t}); for the remaining automorphism cases there exist natural embeddings.",
    };
    pub const CONDITION_3_2: Citation = Citation {
        token: "Condition (3.2)",
        text: "|ᾱ − 1/β| l ≤ |φ′(α)| |1 − α/β|, where α ∈ 𝔻 is the Denjoy–Wolff point, β its repulsive fixed point and l = l(φ′(α)) the length of the canonical spiral associated with φ′(α).",
    };
    pub const LFM_LITERATURE: Citation = Citation {
        token: "[LFMPlong, Proposition 3.4]",
        text: "Complete characterization of the embedding of a linear fractional map according to its fixed points.",
    };
    pub const THEOREM_3_6: Citation = Citation {
        token: "Theorem 3.6",
        text: "Let φ be an inner function. Then there exists a weight w ∈ H² such that C_{w,φ} is embeddable into a C0-semigroup on H².",
    };
    pub const THEOREM_3_8: Citation = Citation {
        token: "Theorem 3.8",
        text: "Let φ be a non constant inner function. Then T_φ is embeddable into a C0-semigroup on H² if and only if φ is not a finite Blaschke product. Moreover, the operators of the semigroup are analytic Toeplitz operators if and only if φ does not have any zero in 𝔻.",
    };
    pub const LEMMA_3_9: Citation = Citation {
        token: "Lemma 3.9",
        text: "Let φ be an outer function. Then T_φ is embeddable into a C0-semigroup of analytic Toeplitz operators on H².",
    };
    pub const PROPOSITION_3_10_I: Citation = Citation {
        token: "Proposition 3.10(i)",
        text: "If B ≡ 1, T_φ is embeddable into a C0-semigroup of analytic Toeplitz operators on H².",
    };
    pub const PROPOSITION_3_10_II: Citation = Citation {
        token: "Proposition 3.10(ii)",
        text: "If S_μ ≡ 1 and if B is a non constant finite Blaschke product, T_φ is not embeddable into a C0-semigroup on H².",
    };
    pub const QUESTION_3_12: Citation = Citation {
        token: "Question 3.12",
        text: "Do we have the embedding of T_φ when φ = Bϕ, with B a non constant Blaschke product and ϕ a non vanishing analytic function on 𝔻?",
    };
    pub const COROLLARY_3_13: Citation = Citation {
        token: "Corollary 3.13",
        text: "Let n ≥ 1 and P ∈ P_n. Then T_P is embeddable into a C0-semigroup on H² if and only if P does not have any zero in 𝔻.",
    };
}

/// How the embedding is realized, when it is constructive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Construction {
    /// `(T_{φ_t})` for a multiplication flow.
    ToeplitzFlow { flow: Semiflow },
    /// `(C_{φ_t})` for a semiflow of self-maps.
    CompositionFlow { flow: Semiflow },
    /// `C_{τ_α}(𝟙 ⊕ U*S_tU)C_{τ_α}` around the interior fixed point `α`.
    ShiftEmbedding { fixed_point: C64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddabilityReport {
    pub verdict: Verdict,
    pub governing_result: String,
    pub citation: String,
    pub construction: Option<Construction>,
    /// Set when the verdict rests on an existence theorem with no concrete
    /// semigroup.
    pub existence_only: bool,
    pub notes: Vec<String>,
    pub warnings: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub condition: Option<LfmCondition>,
}

impl EmbeddabilityReport {
    pub(crate) fn new(verdict: Verdict, cite: Citation) -> Self {
        Self {
            verdict,
            governing_result: cite.token.to_string(),
            citation: cite.text.to_string(),
            construction: None,
            existence_only: false,
            notes: Vec::new(),
            warnings: Vec::new(),
            condition: None,
        }
    }

    pub(crate) fn with_construction(mut self, c: Construction) -> Self {
        self.construction = Some(c);
        self
    }

    pub(crate) fn existence(mut self) -> Self {
        self.existence_only = true;
        self
    }

    pub(crate) fn note(mut self, s: impl Into<String>) -> Self {
        self.notes.push(s.into());
        self
    }
}
