#pragma once

#include "cycver/hamiltonian.hpp"
#include "cycver/homology.hpp"
#include "cycver/sparse.hpp"
#include "cycver/statesim.hpp"

#include <fstream>
#include <functional>
#include <sstream>

namespace cycver {

struct ParseError : std::runtime_error {
    ParseError(const std::string& file, int line, const std::string& what)
        : std::runtime_error(file + ":" + std::to_string(line) + ": " + what) {}
};

namespace io {

class LineReader {
public:
    LineReader(std::istream& in, std::string name) : in_(in), name_(std::move(name)) {}

    /// Next non-empty, non-comment line; false at end of input.
    bool next(std::string& out) {
        std::string raw;
        while (std::getline(in_, raw)) {
            ++line_;
            auto hash = raw.find('#');
            if (hash != std::string::npos) raw.erase(hash);
            size_t b = raw.find_first_not_of(" \t\r\n");
            if (b == std::string::npos) continue;
            size_t e = raw.find_last_not_of(" \t\r\n");
            out = raw.substr(b, e - b + 1);
            return true;
        }
        return false;
    }

    int line() const { return line_; }
    const std::string& name() const { return name_; }

    [[noreturn]] void fail(const std::string& what) const { throw ParseError(name_, line_, what); }

private:
    std::istream& in_;
    std::string name_;
    int line_ = 0;
};

/// Header line `{key=value, key=value, ...}`.
inline std::map<std::string, std::string> parse_header(LineReader& r) {
    std::string s;
    if (!r.next(s)) r.fail("missing header line");
    if (s.front() != '{' || s.back() != '}') r.fail("header must be of the form {key=value, ...}");
    std::map<std::string, std::string> kv;
    std::string body = s.substr(1, s.size() - 2);
    std::string tok;
    std::stringstream ss(body);
    while (std::getline(ss, tok, ',')) {
        size_t eq = tok.find('=');
        if (eq == std::string::npos) r.fail("header entry without '=': " + tok);
        auto trim = [](std::string x) {
            size_t b = x.find_first_not_of(" \t");
            size_t e = x.find_last_not_of(" \t");
            return b == std::string::npos ? std::string() : x.substr(b, e - b + 1);
        };
        kv[trim(tok.substr(0, eq))] = trim(tok.substr(eq + 1));
    }
    return kv;
}

inline long header_int(LineReader& r, const std::map<std::string, std::string>& kv,
                       const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) r.fail("header missing '" + key + "'");
    try {
        return std::stol(it->second);
    } catch (...) {
        r.fail("header '" + key + "' is not an integer: " + it->second);
    }
}

/// CycNum literal `[num/den, num/den, ...]` with exactly d entries.
inline CycNum parse_cycnum(LineReader& r, const FieldSpec& spec, const std::string& s,
                           size_t& pos) {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos >= s.size() || s[pos] != '[') r.fail("expected '[' starting a value");
    size_t close = s.find(']', pos);
    if (close == std::string::npos) r.fail("unterminated value (missing ']')");
    std::string body = s.substr(pos + 1, close - pos - 1);
    pos = close + 1;
    std::vector<Rat> coeffs;
    std::stringstream ss(body);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        size_t b = tok.find_first_not_of(" \t");
        if (b == std::string::npos) r.fail("empty coefficient in value");
        size_t e = tok.find_last_not_of(" \t");
        std::string t = tok.substr(b, e - b + 1);
        try {
            Rat q(t);
            q.canonicalize();
            coeffs.push_back(q);
        } catch (...) {
            r.fail("bad rational '" + t + "'");
        }
    }
    if (static_cast<int>(coeffs.size()) != spec.degree())
        r.fail("value has " + std::to_string(coeffs.size()) + " coefficients, field degree is " +
               std::to_string(spec.degree()));
    return CycNum(spec, coeffs);
}

inline std::string format_cycnum(const CycNum& a) { return a.str(); }

}  // namespace io

// ---------------------------------------------------------------------------
// Matrix files: {k, rows, cols} then dense rows or COO triplets
// ---------------------------------------------------------------------------

inline CycMatrix read_matrix(std::istream& in, const std::string& name) {
    io::LineReader r(in, name);
    auto kv = io::parse_header(r);
    FieldSpec spec(static_cast<int>(io::header_int(r, kv, "k")));
    int rows = static_cast<int>(io::header_int(r, kv, "rows"));
    int cols = static_cast<int>(io::header_int(r, kv, "cols"));
    if (rows <= 0 || cols <= 0) r.fail("non-positive dimensions");
    CycMatrix m(spec, rows, cols);
    std::string line;
    int dense_row = 0;
    while (r.next(line)) {
        if (line.front() == '[') {
            if (dense_row >= rows) r.fail("too many dense rows");
            size_t pos = 0;
            for (int c = 0; c < cols; ++c) m.at(dense_row, c) = io::parse_cycnum(r, spec, line, pos);
            while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
            if (pos != line.size()) r.fail("trailing content after " + std::to_string(cols) + " entries");
            ++dense_row;
        } else {
            // COO triplet: row col [value]
            std::stringstream ss(line);
            long rr, cc;
            if (!(ss >> rr >> cc)) r.fail("expected 'row col [value]'");
            if (rr < 0 || rr >= rows || cc < 0 || cc >= cols) r.fail("triplet index out of range");
            std::string rest;
            std::getline(ss, rest);
            size_t pos = 0;
            CycNum v = io::parse_cycnum(r, spec, rest, pos);
            m.at(static_cast<int>(rr), static_cast<int>(cc)) += v;
        }
    }
    if (dense_row != 0 && dense_row != rows) r.fail("dense matrix ended after row " + std::to_string(dense_row));
    return m;
}

inline void write_matrix(std::ostream& out, const CycMatrix& m) {
    out << "{k=" << m.spec().k() << ", rows=" << m.rows() << ", cols=" << m.cols() << "}\n";
    for (int i = 0; i < m.rows(); ++i) {
        for (int j = 0; j < m.cols(); ++j) {
            if (j) out << ' ';
            out << io::format_cycnum(m.at(i, j));
        }
        out << '\n';
    }
}

/// A state file is a matrix file with cols = 1.
inline CycVector read_state(std::istream& in, const std::string& name) {
    CycMatrix m = read_matrix(in, name);
    if (m.cols() != 1) throw std::runtime_error(name + ": state file must have cols=1");
    return m.col(0);
}

// ---------------------------------------------------------------------------
// Circuit files
// ---------------------------------------------------------------------------

inline GatesetTag parse_gateset(io::LineReader& r, const std::string& s, int k) {
    if (s == "G2") return GatesetTag::G2;
    if (s == "G4") return GatesetTag::G4;
    if (s.size() > 1 && s[0] == 'G') {
        long n = std::stol(s.substr(1));
        if (n == (1L << k)) return GatesetTag::G2K;
        r.fail("gateset " + s + " does not match field k=" + std::to_string(k));
    }
    r.fail("unknown gateset '" + s + "'");
}

inline Circuit read_circuit(std::istream& in, const std::string& name) {
    io::LineReader r(in, name);
    auto kv = io::parse_header(r);
    int k = static_cast<int>(io::header_int(r, kv, "k"));
    Circuit c{FieldSpec(k),
              static_cast<int>(io::header_int(r, kv, "qubits")),
              static_cast<int>(io::header_int(r, kv, "ancillas")),
              static_cast<int>(io::header_int(r, kv, "proof_qubits")),
              GatesetTag::G2K,
              {}};
    auto gs = kv.find("gateset");
    if (gs == kv.end()) r.fail("header missing 'gateset'");
    c.gateset = parse_gateset(r, gs->second, k);
    std::string line;
    while (r.next(line)) {
        std::stringstream ss(line);
        std::string gname, targets;
        ss >> gname;
        std::getline(ss, targets);
        auto gk = gate_from_name(gname);
        if (!gk) r.fail("unknown gate '" + gname + "'");
        Gate g{*gk, {}};
        std::stringstream ts(targets);
        std::string tok;
        while (std::getline(ts, tok, ',')) {
            try {
                g.targets.push_back(std::stoi(tok));
            } catch (...) {
                r.fail("bad target '" + tok + "'");
            }
        }
        if (static_cast<int>(g.targets.size()) != gate_arity(*gk))
            r.fail(std::string("gate ") + gname + " expects " + std::to_string(gate_arity(*gk)) +
                   " targets");
        for (int t : g.targets)
            if (t < 0 || t >= c.qubits) r.fail("target out of range");
        c.gates.push_back(std::move(g));
    }
    return c;
}

inline void write_circuit(std::ostream& out, const Circuit& c) {
    out << "{k=" << c.spec.k() << ", qubits=" << c.qubits << ", ancillas=" << c.ancillas
        << ", proof_qubits=" << c.proof_qubits << ", gateset=" << gateset_name(c.gateset, c.spec.k())
        << "}\n";
    for (const auto& g : c.gates) {
        out << gate_name(g.kind) << ' ';
        for (size_t i = 0; i < g.targets.size(); ++i) {
            if (i) out << ',';
            out << g.targets[i];
        }
        out << '\n';
    }
}

// ---------------------------------------------------------------------------
// Sparse Hamiltonian files: {k, n, d, h} then triplets
// ---------------------------------------------------------------------------

inline SparseHam read_sparse_ham(std::istream& in, const std::string& name) {
    io::LineReader r(in, name);
    auto kv = io::parse_header(r);
    SparseHam h;
    h.spec = FieldSpec(static_cast<int>(io::header_int(r, kv, "k")));
    h.qubits = static_cast<int>(io::header_int(r, kv, "n"));
    h.degree = static_cast<int>(io::header_int(r, kv, "d"));
    h.denom = Int(static_cast<long>(io::header_int(r, kv, "h")));
    if (h.denom <= 0) r.fail("denominator h must be positive");
    std::string line;
    while (r.next(line)) {
        std::stringstream ss(line);
        long rr, cc;
        if (!(ss >> rr >> cc)) r.fail("expected 'row col [value]'");
        if (rr < 0 || cc < 0 || rr >= static_cast<long>(h.dim()) || cc >= static_cast<long>(h.dim()))
            r.fail("triplet index out of range");
        std::string rest;
        std::getline(ss, rest);
        size_t pos = 0;
        CycNum v = io::parse_cycnum(r, h.spec, rest, pos);
        h.set(static_cast<unsigned long>(rr), static_cast<unsigned long>(cc), v);
    }
    try {
        validate_sparse(h);
    } catch (const std::exception& e) {
        r.fail(e.what());
    }
    return h;
}

inline void write_sparse_ham(std::ostream& out, const SparseHam& h) {
    out << "{k=" << h.spec.k() << ", n=" << h.qubits << ", d=" << h.degree << ", h=" << h.denom
        << "}\n";
    for (const auto& [rc, v] : h.entries)
        out << rc.first << ' ' << rc.second << ' ' << io::format_cycnum(v) << '\n';
}

// ---------------------------------------------------------------------------
// Local Hamiltonian instance files: {k, n, locality, kind} then terms
// ---------------------------------------------------------------------------

inline HamInstance read_ham_instance(std::istream& in, const std::string& name) {
    io::LineReader r(in, name);
    auto kv = io::parse_header(r);
    HamInstance h;
    h.spec = FieldSpec(static_cast<int>(io::header_int(r, kv, "k")));
    h.qubits = static_cast<int>(io::header_int(r, kv, "n"));
    h.locality = static_cast<int>(io::header_int(r, kv, "locality"));
    auto kind = kv.find("kind");
    if (kind == kv.end()) r.fail("header missing 'kind'");
    if (kind->second == "kLH") h.kind = HamKind::kLH;
    else if (kind->second == "kQSAT") h.kind = HamKind::kQSAT;
    else if (kind->second == "kELH") h.kind = HamKind::kELH;
    else r.fail("unknown kind '" + kind->second + "'");
    std::string line;
    while (r.next(line)) {
        if (line.rfind("S=[", 0) != 0) r.fail("expected term header 'S=[q,...]'");
        size_t close = line.find(']');
        if (close == std::string::npos) r.fail("unterminated qubit list");
        std::string body = line.substr(3, close - 3);
        LocalTerm t;
        std::stringstream ss(body);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            try {
                t.qubits.push_back(std::stoi(tok));
            } catch (...) {
                r.fail("bad qubit index '" + tok + "'");
            }
        }
        if (t.qubits.empty()) r.fail("term with empty qubit list");
        if (static_cast<int>(t.qubits.size()) > h.locality) r.fail("term exceeds declared locality");
        for (int q : t.qubits)
            if (q < 0 || q >= h.qubits) r.fail("term qubit out of range");
        const int dim = 1 << t.qubits.size();
        t.block = CycMatrix(h.spec, dim, dim);
        for (int row = 0; row < dim; ++row) {
            std::string rowline;
            if (!r.next(rowline)) r.fail("term block truncated");
            size_t pos = 0;
            for (int c = 0; c < dim; ++c) t.block.at(row, c) = io::parse_cycnum(r, h.spec, rowline, pos);
        }
        h.terms.push_back(std::move(t));
    }
    return h;
}

inline void write_ham_instance(std::ostream& out, const HamInstance& h) {
    out << "{k=" << h.spec.k() << ", n=" << h.qubits << ", locality=" << h.locality
        << ", kind=" << ham_kind_name(h.kind) << "}\n";
    for (const auto& t : h.terms) {
        out << "S=[";
        for (size_t i = 0; i < t.qubits.size(); ++i) {
            if (i) out << ',';
            out << t.qubits[i];
        }
        out << "]\n";
        for (int r = 0; r < t.block.rows(); ++r) {
            for (int c = 0; c < t.block.cols(); ++c) {
                if (c) out << ' ';
                out << io::format_cycnum(t.block.at(r, c));
            }
            out << '\n';
        }
    }
}

// ---------------------------------------------------------------------------
// Graph files: vertex count, then `w v weight` and `e u v` lines
// ---------------------------------------------------------------------------

inline WeightedGraph read_graph(std::istream& in, const std::string& name) {
    io::LineReader r(in, name);
    std::string line;
    if (!r.next(line)) r.fail("missing vertex count");
    WeightedGraph g;
    try {
        g = WeightedGraph::unweighted(std::stoi(line));
    } catch (...) {
        r.fail("first line must be the vertex count");
    }
    while (r.next(line)) {
        std::stringstream ss(line);
        std::string tag;
        ss >> tag;
        if (tag == "w") {
            int v;
            std::string wtok;
            if (!(ss >> v >> wtok)) r.fail("expected 'w vertex weight'");
            if (v < 0 || v >= g.vertices) r.fail("vertex out of range");
            try {
                Rat q(wtok);
                q.canonicalize();
                if (q <= 0) r.fail("weights must be positive");
                g.weights[v] = q;
            } catch (const ParseError&) {
                throw;
            } catch (...) {
                r.fail("bad weight '" + wtok + "'");
            }
        } else if (tag == "e") {
            int u, v;
            if (!(ss >> u >> v)) r.fail("expected 'e u v'");
            try {
                g.add_edge(u, v);
            } catch (const std::exception& e) {
                r.fail(e.what());
            }
        } else {
            r.fail("unknown line tag '" + tag + "' (expected w or e)");
        }
    }
    return g;
}

inline void write_graph(std::ostream& out, const WeightedGraph& g) {
    out << g.vertices << '\n';
    for (int v = 0; v < g.vertices; ++v)
        if (g.weights[v] != 1) out << "w " << v << ' ' << g.weights[v].get_str() << '\n';
    for (const auto& [u, v] : g.edges) out << "e " << u << ' ' << v << '\n';
}

// ---------------------------------------------------------------------------

inline std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open file");
    return in;
}

template <typename T, typename F>
T read_file(const std::string& path, F reader) {
    std::ifstream in = open_input(path);
    return reader(in, path);
}

inline CycMatrix read_matrix_file(const std::string& p) {
    return read_file<CycMatrix>(p, [](std::istream& i, const std::string& n) { return read_matrix(i, n); });
}
inline CycVector read_state_file(const std::string& p) {
    return read_file<CycVector>(p, [](std::istream& i, const std::string& n) { return read_state(i, n); });
}
inline Circuit read_circuit_file(const std::string& p) {
    return read_file<Circuit>(p, [](std::istream& i, const std::string& n) { return read_circuit(i, n); });
}
inline SparseHam read_sparse_ham_file(const std::string& p) {
    return read_file<SparseHam>(p, [](std::istream& i, const std::string& n) { return read_sparse_ham(i, n); });
}
inline HamInstance read_ham_instance_file(const std::string& p) {
    return read_file<HamInstance>(p, [](std::istream& i, const std::string& n) { return read_ham_instance(i, n); });
}
inline WeightedGraph read_graph_file(const std::string& p) {
    return read_file<WeightedGraph>(p, [](std::istream& i, const std::string& n) { return read_graph(i, n); });
}

}  // namespace cycver
