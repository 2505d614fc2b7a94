#ifndef RODCTL_EDGE_SYSTEM_HPP
#define RODCTL_EDGE_SYSTEM_HPP

#include "rodctl/core.hpp"
#include "rodctl/mesh.hpp"
#include "rodctl/sampled_function.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace rodctl {

/// Initial and terminal states on [-1, 1]. All four profiles share one grid
/// with P - 1 intervals per segment, so every interface is a sample point.
struct StateSpec {
    SampledFunction v0, r0, v1, r1;

    /// Samples per characteristic piece implied by the grid and N.
    Index samples_per_piece(int N) const;
    void check_compatible(const MeshConfig& mesh) const;
};

using Profile = std::function<double(double)>;

/// Samples the four profiles on the grid matching (N, P).
StateSpec make_state(int N, Index samples, const Profile& v0, const Profile& r0, const Profile& v1,
                     const Profile& r1);

/// Potential from a momentum density: r(x) = integral of p from -1 to x.
SampledFunction potential_from_momentum(const SampledFunction& p);

enum class DataSource { V0, R0, V1, R1 };

const char* to_string(DataSource s);

// -- unknown catalog --------------------------------------------------------

struct Unknown {
    enum class Kind { Wave, Jump };
    Kind kind;
    int index;  ///< k for waves, n for jumps
    int m;
    Side side;  ///< meaningful for waves only
};

/// Waves w(+/-)_{k,m} for k in J_s, m in J_t (both sides, + first), then
/// jumps u_{n,m} for n in J_x, m in J_t without 2M.
class UnknownCatalog {
  public:
    UnknownCatalog() = default;
    explicit UnknownCatalog(const MeshConfig& mesh);

    Index size() const { return static_cast<Index>(entries_.size()); }
    Index wave_count() const { return wave_count_; }
    const Unknown& operator[](Index i) const { return entries_[i]; }
    bool is_wave(Index i) const { return i < wave_count_; }

    Index wave(int k, int m, Side side) const;
    Index jump(int n, int m) const;
    std::string label(Index i) const;

  private:
    int N_ = 0;
    int M_ = 0;
    Index wave_count_ = 0;
    std::vector<Unknown> entries_;
};

// -- edge constraints -------------------------------------------------------

/// coef * source(z_plus_k + z), or at z_plus_k + lambda - z when reflected.
struct DataTerm {
    DataSource source;
    Rational coef;
    int segment;
    bool reflected;
};

/// coef * source(x) for a fixed abscissa.
struct ConstantTerm {
    DataSource source;
    Rational coef;
    double x;
};

struct EdgeRow {
    enum class Block { Initial, Terminal, Boundary, Interelement };
    Block block;
    std::vector<std::pair<Index, int>> coefs;
    std::vector<DataTerm> data;
    std::vector<ConstantTerm> constants;
    int gauge_segment = -1;  ///< position in J_s of the terminal constant, or -1
    Rational gauge_coef = 0;
    std::string label;
};

/// sum_j C(i, j) w_j(z) = rhs_i(z) + sum_k gauge(i, k) c_k for z in [0, lambda].
struct EdgeSystem {
    MeshConfig mesh;
    UnknownCatalog catalog;
    std::vector<EdgeRow> rows;
    Eigen::MatrixXi C;
    RationalMatrix gauge;  ///< N_e x N
    Matrix rhs;            ///< N_e x P samples on [0, lambda]
    Index samples = 0;

    Index block_count(EdgeRow::Block b) const;
};

/// Coefficient structure only; rhs left empty.
EdgeSystem assemble_edge_structure(const MeshConfig& mesh);

EdgeSystem assemble_edge_constraints(const MeshConfig& mesh, const StateSpec& state);

// -- vertex conditions ------------------------------------------------------

struct VertexTerm {
    Index column;
    bool at_end;  ///< evaluate at z = lambda (else z = 0)
    int coef;
};

/// sum coef * w_column(z) = 0.
struct VertexRow {
    std::vector<VertexTerm> terms;
    std::string label;
};

/// Vertex conditions in their counted form: control-jump continuity at the
/// interior mesh instants plus central wave continuity (odd N), or the
/// near-central waves and u_{0,0}(0) = 0 (even N). Exactly N_b rows.
std::vector<VertexRow> assemble_vertex_conditions(const MeshConfig& mesh);

/// Continuity of every piece junction and u_{n,0}(0) = 0 for every n.
std::vector<VertexRow> closure_vertex_conditions(const MeshConfig& mesh);

// -- elimination ------------------------------------------------------------

enum class Feasibility { Feasible, Infeasible };

struct FeasibilityReport {
    Feasibility status = Feasibility::Feasible;
    std::string reason;
    bool feasible() const { return status == Feasibility::Feasible; }
};

FeasibilityReport feasibility_check(int N, int M);

/// Pivot preference for the elimination: end-layer waves, boundary jumps,
/// interior jumps from the outside in, then the remaining waves from the
/// outside in and bottom to top.
std::vector<Index> elimination_order(const MeshConfig& mesh, const UnknownCatalog& catalog);

/// w(z) = A y(z) + Cg c + g(z) over the catalog. y holds the N_s free
/// entries (free_map), c the N terminal constants.
struct Parametrization {
    MeshConfig mesh;
    UnknownCatalog catalog;
    std::vector<Index> free_map;
    RationalMatrix A_exact;      ///< N_v x N_s
    RationalMatrix gauge_exact;  ///< N_v x N
    RationalMatrix R_exact;      ///< N_v x N_e, maps row data to entries
    Matrix A;
    Matrix Cg;
    Matrix g;  ///< N_v x P
    Index samples = 0;

    Index free_count() const { return A.cols(); }
    double step() const { return mesh.lambda / double(samples - 1); }
    /// Every catalog entry on the grid; Y is P x N_s.
    Matrix entries(const Matrix& Y, const Vector& c) const;
};

Parametrization eliminate(const EdgeSystem& system, const MeshConfig& mesh);

/// Pointwise residual max_i,z |C w - rhs - gauge c|.
double edge_residual(const EdgeSystem& system, const Matrix& entries, const Vector& c);

/// B1 y(lambda) - B0 y(0) = Bc c + b0 over the independent vertex rows.
struct EssentialBC {
    Matrix B0, B1, Bc;
    Vector b0;
    RationalMatrix exact;  ///< [B0 | B1 | Bc] of the kept rows
    Index rank = 0;
    Index rows_in = 0;
    std::vector<std::string> labels;
    double dropped_inconsistency = 0.0;

    Vector residual(const Vector& y0, const Vector& y1, const Vector& c) const;
};

EssentialBC boundary_matrices(const Parametrization& par, const std::vector<VertexRow>& rows);

/// Full vertex set used by the solvers: counted rows followed by the closure.
std::vector<VertexRow> all_vertex_conditions(const MeshConfig& mesh);

/// CSV dumps with exact rational strings.
void write_matrix_csv(const std::string& path, const Eigen::MatrixXi& m);
void write_matrix_csv(const std::string& path, const RationalMatrix& m);
void write_free_map_csv(const std::string& path, const Parametrization& par);

}  // namespace rodctl

#endif
