use serde::Serialize;

use crate::bigbracket::Shift;
use crate::mc::{Window, MAX_BASIS, MAX_WINDOW};
use crate::qlb::CASIMIR_PHI;
use crate::rmatrix::CYBE_LAMBDA_FACTOR;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WindowEntry {
    pub shift: u8,
    pub max_degree: usize,
    pub max_weight: usize,
}

/// Every sign and normalization the library commits to. Stamped into CLI
/// reports; the calibration tests pin the numeric entries.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConventionLedger {
    pub version: u32,
    pub wedge_embedding: &'static str,
    pub sym_embedding: &'static str,
    pub alternation: &'static str,
    pub cobracket_layout: &'static str,
    pub ce_sign: &'static str,
    pub big_bracket: &'static str,
    pub schouten: &'static str,
    pub twist: &'static str,
    pub gauge: &'static str,
    pub casimir_phi: (i64, i64),
    pub casimir_phi_formula: &'static str,
    pub r_split: &'static str,
    pub cybe_lambda_factor: i64,
    pub cdybe: &'static str,
    pub shift2_components: &'static str,
    pub trace_form: &'static str,
    pub double_pairing: &'static str,
    pub windows: Vec<WindowEntry>,
    pub max_window: usize,
    pub max_basis: usize,
}

fn window(shift: Shift, n: u8) -> WindowEntry {
    let Window { max_degree, max_weight } = Window::default_for(shift);
    WindowEntry { shift: n, max_degree, max_weight }
}

impl ConventionLedger {
    pub fn current() -> Self {
        ConventionLedger {
            version: 1,
            wedge_embedding: "x1∧…∧xp = Σ_σ sgn(σ) x_σ1⊗…⊗x_σp, no 1/p!",
            sym_embedding: "x1⊙…⊙xp = Σ_σ x_σ1⊗…⊗x_σp, no 1/p!",
            alternation: "Alt(T) = Σ_σ sgn(σ) σ(T), unnormalized",
            cobracket_layout: "δ stored as δ^{ij}_k with the input slot first: idx [k, i, j]",
            ce_sign: "d = {μ, ·}; on C⁰, (dx)(ξ) = −ad_ξ x, so ker d|C⁰ = invariants",
            big_bracket: "{e^i, e_j} = δ^i_j, e^i odd, e_j of parity n",
            schouten: "⟦a, b⟧ = {a, {μ, b}}; ⟦x, y⟧ = −[x, y] on g",
            twist: "δ' = δ + dλ, φ' = φ + {δ, λ} − ½⟦λ, λ⟧",
            gauge: "twisting by λ is the gauge action of −λ along δ(t) = δ₀ + t dλ, φ(t) = φ₀ + t[δ₀, λ] + t²/2 [dλ, λ]",
            casimir_phi: CASIMIR_PHI,
            casimir_phi_formula: "φ(c) = −¼ [c₁₂, c₂₃] read as a 3-vector",
            r_split: "r = 2λ + c, c = ½(r + rᵀ)",
            cybe_lambda_factor: CYBE_LAMBDA_FACTOR,
            cdybe: "CYBE(r) + Alt(d_dR r) with d_dR r = Σ h_i ⊗ ∂r/∂x_i",
            shift2_components: "Sym^p(g[-2]) components are polynomial coefficients times ∏ mult!",
            trace_form: "Killing/(2n) on sl_n (sl2, sl3)",
            double_pairing: "⟨x + ξ, y + η⟩ = ξ(y) + η(x); d = g ⊕ g uses κ ⊖ κ",
            windows: vec![window(Shift::One, 1), window(Shift::Two, 2)],
            max_window: MAX_WINDOW,
            max_basis: MAX_BASIS,
        }
    }
}
