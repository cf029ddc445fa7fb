#pragma once

#include <optional>
#include <string>
#include <vector>

#include "atlas/geometry.hpp"

namespace atlas {

class StokesMatrix {
public:
    StokesMatrix() = default;
    explicit StokesMatrix(int n) : n_(n), e_(size_t(n) * n, 0) {}
    StokesMatrix(std::initializer_list<std::initializer_list<long long>> rows);

    int size() const { return n_; }
    long long operator()(int i, int j) const { return e_[idx(i, j)]; }
    long long& operator()(int i, int j) { return e_[idx(i, j)]; }
    bool antisymmetric() const;
    bool operator==(const StokesMatrix&) const = default;

private:
    size_t idx(int i, int j) const;
    int n_ = 0;
    std::vector<long long> e_;
};

// Integer linear form over the base symbols beta_1..beta_n.
struct LinearForm {
    std::vector<long long> c;
    bool operator==(const LinearForm&) const = default;
    bool zero() const;
    double eval(const std::vector<double>& beta) const;
    std::string str() const;
};
using SigmaVector = std::vector<LinearForm>;
SigmaVector symbolic_sigma(int n);

enum class EventKind { stokes, higher };

struct LogRecord {
    int index = 0;
    EventKind kind = EventKind::stokes;
    int i = 0, j = 0, k = -1;
    int direction = 0;
    double arclength = 0;
    long long delta = 0;  // S_ij for stokes, S_ij S_jk for higher (before direction)
};

struct ConnectionState {
    cplx at;
    Frame frame;
    SigmaVector sigma;
    StokesMatrix stokes;
    std::vector<LogRecord> log;
    bool antisymmetric = true;
};

using IntMatrix = std::vector<std::vector<long long>>;
IntMatrix stokes_automorphism_matrix(const StokesMatrix& S, int i, int j);
long long determinant(const IntMatrix& m);

ConnectionState base_state(const PhaseParams& p, const StokesMatrix& S);
void apply_stokes(ConnectionState& s, int i, int j, int direction, double arclength = 0);
void apply_higher(ConnectionState& s, int i, int k, int j, int direction, double arclength = 0);
ConnectionState replay(ConnectionState base, const std::vector<LogRecord>& log);

ConnectionState transport(const ConnectionState& s, const std::vector<cplx>& path, const StokesGraph& g);

// Re-express a state in the labels and amplitude signs of ref, a frame at the
// same point. Needed after loops that wind around turning points.
ConnectionState relabel(const ConnectionState& s, const Frame& ref);

// Admissible polyline from a to b: straight, with semicircular detours around
// crossing and turning points closer than the safe distance.
std::vector<cplx> route(cplx a, cplx b, const StokesGraph& g);

struct Activity {
    bool active = false;
    bool relevant = false;
};
Activity classify(CurveKind kind, int i, int j, int k, const ConnectionState& s,
                  const std::optional<std::vector<double>>& beta = std::nullopt);

struct CurvePiece {
    int curve = -1;
    size_t begin = 0, end = 0;  // vertex range [begin, end]
    Activity activity;
};
std::vector<CurvePiece> curve_activity(const StokesGraph& g, const ConnectionState& base,
                                       const std::optional<std::vector<double>>& beta = std::nullopt);

struct Probe {
    std::string label;
    cplx z;
};
struct RegionRow {
    std::string label;
    cplx z;
    StokesMatrix S;
    SigmaVector sigma;
};
std::vector<RegionRow> region_tables(const StokesGraph& g, const ConnectionState& base,
                                     const std::vector<Probe>& probes);

// Probe points for the reference parameters. The Stokes-constant table uses
// regions a1-a5 of the higher-order arrangement and sectors c1-c8 around the
// six-fold crossing; the sigma table uses sectors a1-a5 around the upper
// three-line crossing and b1-b8 around the six-fold crossing.
enum class TableKind { stokes, sigma };
std::vector<Probe> reference_probes(TableKind kind);
// Closed loop through the b-sectors in table order, starting and ending in b1.
std::vector<cplx> reference_b_cycle();

}  // namespace atlas
