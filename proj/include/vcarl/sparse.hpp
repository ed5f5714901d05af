#pragma once

#include "vcarl/embedding.hpp"
#include "vcarl/outer.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace vcarl {

struct SparseConfig {
    WavePacketParams packet;
    std::optional<TentGeometry> geometry; // defaults from packet.b
    EmbeddingGridSpec grid{1.0, 6, 64};
    OuterNormOptions norm;
    double p = 1.5;
    double sigma = 8.0 / 3.0;
    double tau = 1.6;
    double c_initial = 1.0 / 16.0;
    std::size_t max_halvings = 40;
    std::size_t generation_cap = 8;
    double embedding_K = 4.0;      // target constant for the embedding bounds
    bool embedding_sets = true;    // build U and V
    std::size_t packing_log2 = 12; // sum |I| <= 2^{-12} |Q|

    void validate() const;
    TentGeometry tent_geometry() const { return geometry ? *geometry : TentGeometry::defaults(packet); }
};

// Gridded view of Q: fields of f 1_{3Q}, g 1_{3Q} on the embedding grid of Q.
struct NodeFields {
    CellRange Q;
    Interval interval;
    TileGridPtr grid;
    SampledSignal f3, g3;
    TileField F, A;
    double avg_f = 0.0; // <f>_{3Q,p}
    double avg_g = 0.0; // <g>_{3Q,1}
};

NodeFields node_fields(const SampledSignal& f, const SampledSignal& g, const LinearizationData& L, CellRange Q,
                       const SparseConfig& cfg);

enum class EmbeddingKind { energy, mass };

struct EmbeddingSet {
    std::vector<CellRange> intervals; // dyadic subintervals of Q
    double norm = 0.0;                // restricted outer norm after removal
    double scale = 0.0;               // |Q|^{1/exponent} <h>
    double achieved_K = 0.0;
    bool within_target = true;
};

// Greedy removal sequence for one node and one embedding; budget choices are
// prefixes of it, so the achieved constant is nonincreasing in the budget.
class EmbeddingSequence {
public:
    EmbeddingSequence(const NodeFields& node, EmbeddingKind kind, const SparseConfig& cfg);

    EmbeddingSet for_budget(double c);
    std::size_t length() const { return prefixes_.size() - 1; }

private:
    double prefix_norm(std::size_t k);

    const NodeFields* node_;
    EmbeddingKind kind_;
    const SparseConfig* cfg_;
    std::vector<std::vector<CellRange>> prefixes_;
    std::vector<long> prefix_cells_;
    std::map<std::size_t, double> norms_;
    double scale_ = 0.0;
    std::optional<TentFamily> family_;
};

EmbeddingSet embedding_exceptional_set(const NodeFields& node, EmbeddingKind kind, double c, const SparseConfig& cfg);

struct ExceptionalSet {
    CellRange parent;
    std::vector<CellRange> components;
    double budget = 0.0;
    std::size_t halvings = 0;
    long cells = 0;
    EmbeddingSet U, V;

    double length(double spacing) const { return static_cast<double>(cells) * spacing; }
};

// Components of Q cap (U cup V cup {M_p f > <f>/c} cup {M_1 g > <g>/c}) with c
// halved until the packing bound holds.
ExceptionalSet exceptional_set(const NodeFields& node, const SparseConfig& cfg);
// The same for given signals, building the node internally.
ExceptionalSet exceptional_set(const SampledSignal& f, const SampledSignal& g, const LinearizationData& L, CellRange Q,
                               const SparseConfig& cfg);

bool packing_holds(long child_cells, long parent_cells, std::size_t log2);

struct NodeReport {
    CellRange Q;
    std::size_t generation = 0;
    ExceptionalSet E;
    double local_term = 0.0;
    double local_ratio = 0.0; // local / (|Q| <f>_{3Q,p} <g>_{3Q,1})
    double B_Q = 0.0;
    double decomposition_rhs = 0.0;
    bool decomposition_ok = true;
    bool tiles = false;       // node grid has tiles
};

NodeReport principal_iteration(const SampledSignal& f, const SampledSignal& g, const LinearizationData& L, CellRange Q,
                               const SparseConfig& cfg, std::size_t generation = 0);

struct SparseCollection {
    struct Member {
        CellRange Q;                    // node; the sparse interval is 3Q
        std::vector<CellRange> witness; // X_Q = Q minus its children
    };
    double origin = 0.0, spacing = 1.0;
    std::vector<Member> members;
    double eta = 1.0;

    Interval interval(std::size_t i) const { return cell_interval(origin, spacing, members[i].Q.dilate3()); }
};

struct IterationTrace {
    std::vector<std::vector<CellRange>> levels;
    double epsilon = 0.0;
    std::size_t N = 0;
    std::vector<NodeReport> nodes;
};

struct Certificate {
    bool packing = true;
    bool nesting = true;
    bool disjoint = true;
    bool eta_bound = true;
    bool size_decay = true;
    bool ok() const { return packing && nesting && disjoint && eta_bound && size_decay; }
    std::string message;
};

struct SparseResult {
    SparseCollection collection;
    IterationTrace trace;
    Certificate certificate;
};

// epsilon <= 0 selects the finest tile scale of the root grid.
SparseResult build_sparse(const SampledSignal& f, const SampledSignal& g, const LinearizationData& L, CellRange Q0,
                          const SparseConfig& cfg, double epsilon = 0.0);

Certificate certify(const SparseCollection& S, const IterationTrace& trace, std::size_t packing_log2);

struct DominationReport {
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
};

double sparse_form(const SampledSignal& f, const SampledSignal& g, const SparseCollection& S, double p);
DominationReport verify_domination(const SampledSignal& f, const SampledSignal& g, const SparseCollection& S, double p,
                                   double r, const FrequencyGrid& grid);

// Tiles of box(P): u at the midpoints of `u_points` equal parts of P, t
// geometric in [|P|/2, |P|).
TileGridPtr box_grid(const Interval& P, std::size_t u_points, std::size_t t_points, double c_eta, double eta_lo,
                     double eta_hi);

struct BoxNorms {
    double F = 0.0; // ||F(f) 1_box||_{L^sigma(s^e)}
    double A = 0.0; // ||A(g) 1_box||_{L^tau(s^m)}
};

// Direct spatial evaluation; either signal may be null.
BoxNorms box_norms(const SampledSignal* f, const SampledSignal* g, const LinearizationData* L, const Interval& P,
                   const SparseConfig& cfg, double eta_lo, double eta_hi, std::size_t u_points = 16,
                   std::size_t t_points = 4);

struct TailRow {
    std::size_t k = 0;
    double sum_length = 0.0; // sum over P in P_k(I) of |P|
    double term = 0.0;       // sum over P of F-norm times A-norm
    double bound = 0.0;
    bool pass = true;
};

// Box-restricted norms of f 1_{3I} and g 1_{3Q \ 3I} over dyadic P inside I.
std::vector<TailRow> tail_decay_check(const SampledSignal& f, const SampledSignal& g, const LinearizationData& L,
                                      CellRange I, CellRange Q, std::size_t max_k, const SparseConfig& cfg,
                                      double exponent = 20.0);

} // namespace vcarl
