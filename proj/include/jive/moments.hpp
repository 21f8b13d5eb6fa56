#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "jive/matrix.hpp"

namespace jive {

/// Gaussian moment identities for monomials of a noise matrix E (n1 x n2,
/// i.i.d. entries of variance sigma^2).
///
/// Degree 2:
///   EAE   : E[E A E]          = sigma^2 A^T
///   EAET  : E[E A E^T]        = sigma^2 Trace(A) I
///   TrEAE : E[Trace(E A) E]   = sigma^2 A^T
///
/// Degree 4, identified by the transpose pattern of the four E factors
/// (N = E, T = E^T), D4_1 .. D4_8:
///   D4_1: E A E^T B E C E^T -> Tr(C)Tr(A) B + Tr(A C^T) B^T + Tr(B)Tr(AC) I
///   D4_2: E A E  B E^T C E^T -> A^T B C^T + C B A + Tr(B)Tr(AC) I
///   D4_3: E^T A E B E  C E^T -> Tr(C)Tr(A) B + C B A + C^T B A^T
///   D4_4: E^T A E B E  C E   -> Tr(A) B C^T + C A^T B^T + Tr(A B^T C) I
///   D4_5: E A E^T B E  C E   -> Tr(A) B C^T + B^T C^T A + Tr(B) C^T A^T
///   D4_6: E A E  B E^T C E   -> Tr(C) A^T B + C A^T B^T + Tr(B) C^T A^T
///   D4_7: E A E  B E  C E^T  -> Tr(C) A^T B + B^T C^T A + Tr(A B^T C) I
///   D4_8: E A E  B E  C E    -> A^T B C^T + Tr(A C^T) B^T + C^T B A^T
/// (all times sigma^4)
///
/// Odd3 is the odd-degree sanity monomial E A E A E, whose expectation is 0.
enum class MomentIdentity {
    EAE,
    EAET,
    TrEAE,
    D4_1,
    D4_2,
    D4_3,
    D4_4,
    D4_5,
    D4_6,
    D4_7,
    D4_8,
    Odd3,
};

std::string to_string(MomentIdentity id);
MomentIdentity parse_moment_identity(const std::string& s);
const std::vector<MomentIdentity>& all_moment_identities();

struct MomentShapes {
    int degree = 0;  // 2, 3 or 4
    std::size_t a_rows = 0, a_cols = 0;
    std::size_t b_rows = 0, b_cols = 0;  // zero when unused
    std::size_t c_rows = 0, c_cols = 0;  // zero when unused
    std::size_t out_rows = 0, out_cols = 0;
};

/// Required operand shapes for an identity with E of size n1 x n2.
MomentShapes moment_shapes(MomentIdentity id, std::size_t n1, std::size_t n2);

/// Degree-2 closed forms (identity must be EAE, EAET or TrEAE).
Matrix closed_form_deg2(MomentIdentity id, const Matrix& a, double sigma, std::size_t n1,
                        std::size_t n2);

/// Degree-4 closed forms (identity must be D4_1 .. D4_8).
Matrix closed_form_deg4(MomentIdentity id, const Matrix& a, const Matrix& b, const Matrix& c,
                        double sigma);

/// Unified: dispatches on the identity's degree (Odd3 evaluates to zero).
Matrix closed_form(MomentIdentity id, const Matrix& a, const Matrix* b, const Matrix* c,
                   double sigma, std::size_t n1, std::size_t n2);

struct MomentReport {
    MomentIdentity identity;
    Matrix closed;
    Matrix mc_estimate;
    double max_abs_dev = 0;
    double max_std_err = 0;
    std::size_t samples = 0;
};

/// Draws `samples` independent E matrices, averages the monomial entrywise
/// and compares to the closed form. max_std_err is the largest entrywise
/// standard error of the MC mean. Requires samples >= 10^4 and n1, n2 <= 8.
MomentReport mc_verify(MomentIdentity id, const Matrix& a, const Matrix* b, const Matrix* c,
                       double sigma, std::size_t n1, std::size_t n2, std::size_t samples,
                       std::uint64_t seed);

}  // namespace jive
