#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "leaklab/types.hpp"

namespace leaklab {

/// Relative keyword volumes |D_a(w_i)|/|D_a|, clamped into (0,1) so the
/// likelihood logs stay finite.
std::vector<double> build_aux_volumes(const InvertedIndex& aux_index);

/// Pairwise conjunction co-occurrence over the auxiliary documents:
/// entry (g,g') = |docs matching both conjunctions| / |D_a|, clamped.
Matrix build_cooccurrence(const InvertedIndex& aux_index,
                          std::span<const Conjunction> universe);

/// Probability a document matches neither conjunction, computed exactly
/// (no clamping); companion input to the clrz co-occurrence adaptation.
Matrix build_cooccurrence_not(const InvertedIndex& aux_index,
                              std::span<const Conjunction> universe);

struct CooccurrenceMatrices {
  Matrix both;     // clamped
  Matrix neither;  // exact
};

/// Both matrices in one pass over the candidate match sets.
CooccurrenceMatrices build_cooccurrence_matrices(const InvertedIndex& aux_index,
                                                 std::span<const Conjunction> universe,
                                                 bool with_neither);

/// Expected keyword volume after clrz obfuscation: v*TPR + (1-v)*FPR.
std::vector<double> adapt_clrz_volumes(const std::vector<double>& volumes, double tpr,
                                       double fpr);
double adapt_clrz_volume(double volume, double tpr, double fpr);

/// Expected conjunction co-occurrence after clrz for dimension-d
/// conjunctions. Diagonal: TPR^d * V + FPR^d * Vnot. Off-diagonal:
/// TPR^2d * V + FPR^2d * Vnot + TPR^d * FPR^d * (1 - V - Vnot).
/// Throws if an output lands outside [0,1] beyond 1e-9.
Matrix adapt_clrz_cooccurrence(const Matrix& both, const Matrix& neither, double tpr,
                               double fpr, std::uint32_t d);

/// seal-aware auxiliary index: documents are duplicated round-robin until
/// the real count reaches target_size, then every posting is padded with
/// dummy ids to the next power of x (same rule the client uses).
InvertedIndex adapt_seal(const InvertedIndex& aux_index, std::uint64_t x,
                         std::uint64_t target_size);

}  // namespace leaklab
