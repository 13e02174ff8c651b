#include "gsparc/decoding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace gsparc {

namespace {

// Column ranges the decoder may scan. For SSE these are the sub-blocks (the
// unused tail is never selectable); for SFE a single range covering all of A.
struct ScanRanges {
    std::vector<std::uint32_t> begin, end;
    std::vector<std::uint32_t> block;  // sub-block index handed to the family
};

ScanRanges make_ranges(const CodeInstance& inst) {
    ScanRanges r;
    if (inst.scheme == Scheme::SSE) {
        for (std::uint32_t k = 0; k < inst.partition.block_count(); ++k) {
            r.begin.push_back(inst.partition.offsets[k]);
            r.end.push_back(inst.partition.offsets[k] + inst.partition.sizes[k]);
            r.block.push_back(k);
        }
    } else {
        r.begin.push_back(0);
        r.end.push_back(std::uint32_t(inst.L()));
        r.block.push_back(0);
    }
    return r;
}

struct MadState {
    CVec r;                                // residual y - A x_hat
    CVec c;                                // <r, a_i> for all columns
    std::vector<std::uint8_t> range_off;   // discarded scan ranges (SSE blocks)
    std::vector<std::uint8_t> col_off;     // discarded columns (SFE)
    SparseCodeword est;
};

void mad_apply(const CodeInstance& inst, const ScanRanges& ranges, MadState& st,
               std::uint32_t col, std::uint32_t sym_idx, bool update_corr) {
    const std::uint32_t range =
        inst.scheme == Scheme::SSE ? std::uint32_t(inst.partition.block_of(col)) : 0u;
    const cplx b = inst.block_constellation(ranges.block[range]).symbols[sym_idx];
    st.est.support.push_back(col);
    st.est.symbol_idx.push_back(sym_idx);
    st.est.symbols.push_back(b);
    st.r -= b * inst.dict->columns.col(col);
    if (update_corr) {
        if (inst.gram) st.c -= b * inst.gram->entries.col(col);
        else st.c = inst.dict->columns.adjoint() * st.r;
    }
    if (inst.scheme == Scheme::SSE) st.range_off[range] = 1;
    else st.col_off[col] = 1;
}

// Joint argmax of Re(c_i b_m^*) - |b_m|^2 / 2 over selectable (i, m); scan
// order makes ties resolve to the lowest column, then the lowest symbol.
bool mad_select(const CodeInstance& inst, const ScanRanges& ranges, const MadState& st,
                std::uint32_t& out_col, std::uint32_t& out_sym, double& out_p) {
    double best = -std::numeric_limits<double>::infinity();
    std::uint32_t best_col = 0, best_sym = 0;
    bool found = false;
    for (std::size_t g = 0; g < ranges.begin.size(); ++g) {
        if (!st.range_off.empty() && st.range_off[g]) continue;
        const Constellation& con = inst.block_constellation(ranges.block[g]);
        const std::uint32_t M = con.M;
        for (std::uint32_t i = ranges.begin[g]; i < ranges.end[g]; ++i) {
            if (!st.col_off.empty() && st.col_off[i]) continue;
            const cplx ci = st.c[i];
            for (std::uint32_t m = 0; m < M; ++m) {
                const cplx b = con.symbols[m];
                const double p =
                    ci.real() * b.real() + ci.imag() * b.imag() - 0.5 * std::norm(b);
                if (p > best) {
                    best = p;
                    best_col = i;
                    best_sym = m;
                    found = true;
                }
            }
        }
    }
    out_col = best_col;
    out_sym = best_sym;
    out_p = best;
    return found;
}

void sort_by_support(SparseCodeword& cw) {
    std::vector<std::size_t> order(cw.support.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return cw.support[a] < cw.support[b]; });
    SparseCodeword out;
    for (std::size_t idx : order) {
        out.support.push_back(cw.support[idx]);
        out.symbol_idx.push_back(cw.symbol_idx[idx]);
        out.symbols.push_back(cw.symbols[idx]);
    }
    cw.support = std::move(out.support);
    cw.symbol_idx = std::move(out.symbol_idx);
    cw.symbols = std::move(out.symbols);
}

void validate_partial(const CodeInstance& inst, const SparseCodeword& partial) {
    if (partial.K() >= inst.K) throw config_error("partial estimate must have fewer than K entries");
    if (partial.symbol_idx.size() != partial.support.size())
        throw config_error("partial estimate is malformed");
    if (inst.scheme == Scheme::SSE) {
        std::vector<std::uint8_t> seen(inst.partition.block_count(), 0);
        for (auto col : partial.support) {
            const int k = inst.partition.block_of(col);
            if (k < 0) throw config_error("partial column lies in the unused tail");
            if (seen[k]) throw config_error("partial has two columns in one sub-block");
            seen[k] = 1;
        }
    } else {
        std::vector<std::uint32_t> s = partial.support;
        std::sort(s.begin(), s.end());
        if (std::adjacent_find(s.begin(), s.end()) != s.end())
            throw config_error("partial has a repeated column");
        if (!s.empty() && s.back() >= inst.L()) throw config_error("partial column out of range");
    }
}

SparseCodeword mad_core(const CVec& y, const CodeInstance& inst, CVec c0,
                        const SparseCodeword* partial, DecodeTrace* trace) {
    const ScanRanges ranges = make_ranges(inst);
    MadState st;
    st.r = y;
    st.c = std::move(c0);
    if (inst.scheme == Scheme::SSE) st.range_off.assign(ranges.begin.size(), 0);
    else st.col_off.assign(std::size_t(inst.L()), 0);

    std::uint32_t t = 0;
    if (partial) {
        validate_partial(inst, *partial);
        for (std::size_t j = 0; j < partial->support.size(); ++j, ++t)
            mad_apply(inst, ranges, st, partial->support[j], partial->symbol_idx[j], t + 1 < inst.K);
    }
    for (; t < inst.K; ++t) {
        std::uint32_t col, sym;
        double p;
        if (!mad_select(inst, ranges, st, col, sym, p))
            throw config_error("decoder ran out of selectable columns");
        mad_apply(inst, ranges, st, col, sym, t + 1 < inst.K);
        if (trace) trace->steps.push_back({t, col, sym, p, st.r.norm()});
    }
    sort_by_support(st.est);
    st.est.s = assemble_codeword(*inst.dict, st.est.support, st.est.symbols);
    return st.est;
}

std::uint32_t selectable_columns(const CodeInstance& inst) {
    if (inst.scheme == Scheme::SFE) return std::uint32_t(inst.L());
    return inst.partition.used_columns();
}

}  // namespace

SparseCodeword mad_decode(const CVec& y, const CodeInstance& inst, const SparseCodeword* partial,
                          DecodeTrace* trace) {
    if (inst.scheme == Scheme::SSE && inst.K > inst.partition.block_count())
        throw config_error("K exceeds the number of sub-blocks");
    return mad_core(y, inst, inst.dict->columns.adjoint() * y, partial, trace);
}

SparseCodeword pmad_decode(const CVec& y, const CodeInstance& inst, std::uint32_t T,
                           PmadDetail* detail) {
    const ScanRanges ranges = make_ranges(inst);
    const CVec c0 = inst.dict->columns.adjoint() * y;

    // Best symbol and metric per selectable column.
    struct Seed {
        double p;
        std::uint32_t col, sym;
    };
    std::vector<Seed> seeds;
    seeds.reserve(selectable_columns(inst));
    for (std::size_t g = 0; g < ranges.begin.size(); ++g) {
        const Constellation& con = inst.block_constellation(ranges.block[g]);
        for (std::uint32_t i = ranges.begin[g]; i < ranges.end[g]; ++i) {
            const cplx ci = c0[i];
            double best = -std::numeric_limits<double>::infinity();
            std::uint32_t best_m = 0;
            for (std::uint32_t m = 0; m < con.M; ++m) {
                const cplx b = con.symbols[m];
                const double p =
                    ci.real() * b.real() + ci.imag() * b.imag() - 0.5 * std::norm(b);
                if (p > best) {
                    best = p;
                    best_m = m;
                }
            }
            seeds.push_back({best, i, best_m});
        }
    }

    const auto max_T = std::uint32_t(seeds.size());
    std::uint32_t eff_T = std::clamp<std::uint32_t>(T, 1, max_T);
    const bool clamped = eff_T != T;
    std::partial_sort(seeds.begin(), seeds.begin() + eff_T, seeds.end(),
                      [](const Seed& a, const Seed& b) {
                          if (a.p != b.p) return a.p > b.p;
                          return a.col < b.col;
                      });

    SparseCodeword best;
    double best_dist = std::numeric_limits<double>::infinity();
    if (detail) {
        detail->effective_T = eff_T;
        detail->clamped = clamped;
    }
    for (std::uint32_t npath = 0; npath < eff_T; ++npath) {
        SparseCodeword cand;
        if (inst.K == 1) {
            // a seed already is a complete K=1 estimate
            const std::uint32_t range = inst.scheme == Scheme::SSE
                                            ? std::uint32_t(inst.partition.block_of(seeds[npath].col))
                                            : 0u;
            cand.support = {seeds[npath].col};
            cand.symbol_idx = {seeds[npath].sym};
            cand.symbols = {inst.block_constellation(range).symbols[seeds[npath].sym]};
            cand.s = assemble_codeword(*inst.dict, cand.support, cand.symbols);
        } else {
            SparseCodeword partial;
            partial.support.push_back(seeds[npath].col);
            partial.symbol_idx.push_back(seeds[npath].sym);
            cand = mad_core(y, inst, c0, &partial, nullptr);
        }
        const double dist = (y - assemble_codeword(*inst.dict, cand.support, cand.symbols))
                                .squaredNorm();
        if (detail) {
            detail->candidates.push_back(cand);
            detail->distances.push_back(dist);
        }
        if (dist < best_dist) {
            best_dist = dist;
            best = std::move(cand);
        }
    }
    return best;
}

SparseCodeword omp_decode(const CVec& y, const CodeInstance& inst) {
    const ScanRanges ranges = make_ranges(inst);
    const Index N = inst.N();
    const std::uint32_t K = inst.K;
    const CVec c0 = inst.dict->columns.adjoint() * y;

    std::vector<std::uint8_t> range_off(ranges.begin.size(), 0), col_off;
    if (inst.scheme == Scheme::SFE) col_off.assign(std::size_t(inst.L()), 0);

    std::vector<std::uint32_t> support;
    CMat Asub(N, K), Q(N, K), R = CMat::Zero(K, K);
    Eigen::VectorXcd z;
    CVec c = c0;
    bool rank_deficient = false;

    for (std::uint32_t t = 0; t < K; ++t) {
        // argmax |<r, a_i>| over the selectable columns
        double best = -1.0;
        std::uint32_t best_col = 0;
        std::uint32_t best_range = 0;
        bool found = false;
        for (std::size_t g = 0; g < ranges.begin.size(); ++g) {
            if (inst.scheme == Scheme::SSE && range_off[g]) continue;
            for (std::uint32_t i = ranges.begin[g]; i < ranges.end[g]; ++i) {
                if (!col_off.empty() && col_off[i]) continue;
                const double mag = std::norm(c[i]);
                if (mag > best) {
                    best = mag;
                    best_col = i;
                    best_range = std::uint32_t(g);
                    found = true;
                }
            }
        }
        if (!found) throw config_error("decoder ran out of selectable columns");

        support.push_back(best_col);
        Asub.col(t) = inst.dict->columns.col(best_col);
        if (inst.scheme == Scheme::SSE) range_off[best_range] = 1;
        else col_off[best_col] = 1;

        // incremental Gram-Schmidt; a vanishing new direction flips us to the
        // pseudo-inverse path for this and later refits
        if (!rank_deficient) {
            CVec q = Asub.col(t);
            for (std::uint32_t j = 0; j < t; ++j) {
                const cplx rij = Q.col(j).dot(q);
                R(j, t) = rij;
                q -= rij * Q.col(j);
            }
            const double nrm = q.norm();
            if (nrm < 1e-10) {
                rank_deficient = true;
            } else {
                Q.col(t) = q / nrm;
                R(t, t) = nrm;
            }
        }
        const auto tt = Index(t) + 1;
        if (!rank_deficient) {
            z = R.topLeftCorner(tt, tt)
                    .triangularView<Eigen::Upper>()
                    .solve(Q.leftCols(tt).adjoint() * y);
        } else {
            z = Asub.leftCols(tt).completeOrthogonalDecomposition().solve(y);
        }
        if (t + 1 < K) {
            if (inst.gram) {
                c = c0;
                for (Index j = 0; j < tt; ++j) c -= z[j] * inst.gram->entries.col(support[j]);
            } else {
                c = inst.dict->columns.adjoint() * (y - Asub.leftCols(tt) * z);
            }
        }
    }

    SparseCodeword cw;
    cw.support = support;
    cw.symbol_idx.resize(K);
    cw.symbols.resize(K);
    for (std::uint32_t t = 0; t < K; ++t) {
        const std::uint32_t range =
            inst.scheme == Scheme::SSE ? std::uint32_t(inst.partition.block_of(support[t])) : 0u;
        const Constellation& con = inst.block_constellation(range);
        const std::uint32_t m = con.nearest(z[t]);
        cw.symbol_idx[t] = m;
        cw.symbols[t] = con.symbols[m];
    }
    sort_by_support(cw);
    cw.s = assemble_codeword(*inst.dict, cw.support, cw.symbols);
    return cw;
}

SparseCodeword ml_decode_k1(const CVec& y, const CodeInstance& inst) {
    if (inst.K != 1) throw config_error("ml_decode_k1 requires a K=1 code");
    const ScanRanges ranges = make_ranges(inst);
    double best = std::numeric_limits<double>::infinity();
    std::uint32_t best_col = 0, best_sym = 0, best_range = 0;
    for (std::size_t g = 0; g < ranges.begin.size(); ++g) {
        const Constellation& con = inst.block_constellation(ranges.block[g]);
        for (std::uint32_t i = ranges.begin[g]; i < ranges.end[g]; ++i) {
            for (std::uint32_t m = 0; m < con.M; ++m) {
                const double d = (y - con.symbols[m] * inst.dict->columns.col(i)).squaredNorm();
                if (d < best) {
                    best = d;
                    best_col = i;
                    best_sym = m;
                    best_range = std::uint32_t(g);
                }
            }
        }
    }
    SparseCodeword cw;
    cw.support = {best_col};
    cw.symbol_idx = {best_sym};
    cw.symbols = {inst.block_constellation(ranges.block[best_range]).symbols[best_sym]};
    cw.s = assemble_codeword(*inst.dict, cw.support, cw.symbols);
    return cw;
}

GuaranteeReport check_recovery_guarantee(double mu, double gamma, std::uint32_t K) {
    if (!(mu > 0.0 && mu < 1.0)) throw config_error("guarantee requires 0 < mu < 1");
    if (!(gamma >= -1.0 && gamma < 1.0)) throw config_error("guarantee requires -1 <= gamma < 1");
    GuaranteeReport rep;
    rep.mu = mu;
    rep.gamma = gamma;
    rep.K = K;
    rep.bound = std::min((1.0 + mu) / (2.0 * mu), (1.0 + 2.0 * mu - gamma) / (2.0 * mu));
    rep.guaranteed = double(K) < rep.bound;
    return rep;
}

}  // namespace gsparc
