//! Formula anchors attached to report entries. Every entry carries one of
//! these strings; a meta-test checks that full runs use exactly this list.

pub const DEFINING_RELATION: &str = "a^{b^2}=aa^{3b}";
pub const CUBE: &str = "a^3=[a,b^2]^{b^{-1}}";
pub const CUBE_CONJUGATE: &str = "(a^b)^3=[a,b^2]";
pub const COMMUTATOR_SHIFT: &str = "[a^{b^2},a^b]=[a,a^b]^{a^{3b}}";
pub const COMMUTATOR_CONJUGATE: &str = "[a^b,a]=[a,a^b]^{a^{3b}b^{-1}}";
pub const COMMUTATOR_SQUARE: &str = "[a^b,a]^2=[a,a^b,a^{3b}b^{-1}]";
pub const IDENTITY: &str = "u=v \\in F\\rtimes_\\varphi\\mathbb Z";
pub const RELATOR: &str = "r=1 \\in F\\rtimes_\\varphi\\mathbb Z";

pub const SUBSET_PRODUCTS: &str = "\\prod_{\\lambda\\in S}\\lambda\\neq\\pm1,\\ S\\subseteq\\mathrm{spec}(A-Id)";
pub const TOP_COMPOUND: &str = "\\det(A-Id)=\\prod_i(\\alpha_i-1)";
pub const IMAGE_CHAIN: &str = "M\\Delta^k=(A-Id)^kM";
pub const UNIT_SUBLATTICE: &str = "(A-Id)L=L,\\ L\\neq0";

pub const TENSOR_STRUCTURED: &str = "\\prod\\lambda\\neq\\pm1,\\ \\lambda\\in\\mathrm{spec}(U^{\\otimes m}-Id)";
pub const TENSOR_CROSS_CHECK: &str = "\\det(\\Lambda^k(U^{\\otimes m}-Id)\\mp Id)\\neq0";
pub const TENSOR_EIGENVALUES: &str = "\\pm\\alpha_1^l,\\ \\pm\\alpha_2^s,\\ l,s\\geq1";

pub const WITT: &str = "\\dim L^n=\\frac1n\\sum_{d|n}\\mu(d)r^{n/d}";
pub const SECOND_LIE_POWER: &str = "L^2(M)\\cong\\Lambda^2M";
pub const LIE_POWERS: &str = "L^{n+1}(M)\\subseteq M^{\\otimes n+1}";

pub const NORM_M1: &str = "(\\alpha_1-1)(\\alpha_2-1)=-3";
pub const NORM_N1: &str = "(\\alpha_1+1)(\\alpha_2+1)=3";
pub const NORM_DIVISIBILITY: &str = "(\\alpha_1^l-1)(\\alpha_2^l-1)";
pub const NORM_REVERSE: &str = "(\\alpha_1^s+1)(\\alpha_2^s+1)";

pub const H1: &str = "H_1=\\mathbb Z\\oplus\\mathrm{coker}(A-Id)";
pub const H2_MODULE: &str = "H_2(H)=\\mathbb Z/2";
pub const H2_GROUP: &str = "H_2(G)=0";

pub const ENGINE: &str = "\\gamma_n(G)\\supseteq\\gamma_c(F)";
pub const TORSION: &str = "a^{3^k}\\in\\gamma_{k+1}(G),\\ k\\geq1";
pub const GRADED: &str = "\\gamma_n(G)/\\gamma_{n+1}(G)\\cong\\gamma_n(H)/\\gamma_{n+1}(H)";
pub const GAMMA_OMEGA: &str = "\\gamma_\\omega(G)=\\langle[a,a^b]\\rangle^G";
pub const CLOSURE: &str = "\\gamma_{n+1}(G)=[\\gamma_n(G),G]";
pub const TOWER: &str = "\\gamma_{n+1}(G)\\subseteq\\gamma_n(G)";
pub const FREE_GAMMA: &str = "\\gamma_n(F)\\subseteq\\gamma_n(G)";

pub const WITNESS: &str = "[[a^b,a],a,[a^b,a],\\dots,[a^b,a]]\\neq1";

/// Anchors of the six reference identities, in suite order.
pub const REFERENCE_IDENTITY_ANCHORS: [&str; 6] = [
    DEFINING_RELATION,
    CUBE,
    CUBE_CONJUGATE,
    COMMUTATOR_SHIFT,
    COMMUTATOR_CONJUGATE,
    COMMUTATOR_SQUARE,
];

pub const ANCHORS: [&str; 33] = [
    DEFINING_RELATION,
    CUBE,
    CUBE_CONJUGATE,
    COMMUTATOR_SHIFT,
    COMMUTATOR_CONJUGATE,
    COMMUTATOR_SQUARE,
    IDENTITY,
    RELATOR,
    SUBSET_PRODUCTS,
    TOP_COMPOUND,
    IMAGE_CHAIN,
    UNIT_SUBLATTICE,
    TENSOR_STRUCTURED,
    TENSOR_CROSS_CHECK,
    TENSOR_EIGENVALUES,
    WITT,
    SECOND_LIE_POWER,
    LIE_POWERS,
    NORM_M1,
    NORM_N1,
    NORM_DIVISIBILITY,
    NORM_REVERSE,
    H1,
    H2_MODULE,
    H2_GROUP,
    ENGINE,
    TORSION,
    GRADED,
    GAMMA_OMEGA,
    CLOSURE,
    TOWER,
    FREE_GAMMA,
    WITNESS,
];
