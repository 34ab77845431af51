#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "tsdyn/sdp.hpp"

namespace tsdyn {

namespace {

std::string fmt_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void put_entry(std::string& out, std::size_t mat, std::size_t blk, std::size_t i, std::size_t j, double v) {
    out += std::to_string(mat);
    out += ' ';
    out += std::to_string(blk);
    out += ' ';
    out += std::to_string(i);
    out += ' ';
    out += std::to_string(j);
    out += ' ';
    out += fmt_num(v);
    out += '\n';
}

// Entries of one matrix (F_0 or F_i) in block-minor, row-major order. The
// entries of p are already sorted by (block, row, col).
void put_matrix(std::string& out, std::size_t mat, const std::vector<SdpEntry>& entries,
                const std::vector<FreeTerm>& free_terms, double sign, std::size_t nfree, std::size_t free_block) {
    for (const auto& e : entries) put_entry(out, mat, e.block + 1, e.row + 1, e.col + 1, sign * e.value);
    for (const auto& t : free_terms) put_entry(out, mat, free_block, t.var + 1, t.var + 1, sign * t.value);
    for (const auto& t : free_terms)
        put_entry(out, mat, free_block, nfree + t.var + 1, nfree + t.var + 1, -sign * t.value);
}

}  // namespace

std::string export_sdpa(const SdpProblem& problem) {
    problem.validate();
    const SdpProblem p = problem.normalized();
    const std::size_t nfree = p.num_free();
    const std::size_t nblocks = p.num_blocks() + (nfree > 0 ? 1 : 0);
    const std::size_t free_block = p.num_blocks() + 1;

    std::string out;
    out += std::to_string(p.num_equalities()) + "\n";
    out += std::to_string(nblocks) + "\n";
    for (std::size_t k = 0; k < p.psd_blocks.size(); ++k) {
        if (k) out += ' ';
        out += std::to_string(p.psd_blocks[k].dim);
    }
    if (nfree > 0) out += (p.psd_blocks.empty() ? "" : " ") + std::string("-") + std::to_string(2 * nfree);
    out += '\n';
    for (std::size_t i = 0; i < p.num_equalities(); ++i) {
        if (i) out += ' ';
        out += fmt_num(p.equalities[i].rhs);
    }
    out += '\n';

    // F_0 = -C on the PSD blocks and diag(-c, c) on the free block
    std::vector<FreeTerm> obj_free;
    for (std::size_t k = 0; k < nfree; ++k)
        if (p.objective_free[k] != 0.0) obj_free.push_back({static_cast<std::uint32_t>(k), p.objective_free[k]});
    put_matrix(out, 0, p.objective_entries, obj_free, -1.0, nfree, free_block);
    for (std::size_t i = 0; i < p.num_equalities(); ++i)
        put_matrix(out, i + 1, p.equalities[i].entries, p.equalities[i].free_terms, 1.0, nfree, free_block);
    return out;
}

SdpProblem parse_sdpa(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    auto next_line = [&]() -> std::string {
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '"' || line[0] == '*') continue;
            for (char& ch : line)
                if (ch == ',' || ch == '{' || ch == '}' || ch == '(' || ch == ')') ch = ' ';
            return line;
        }
        throw std::invalid_argument("SDPA: unexpected end of input");
    };
    auto first_int = [](const std::string& s) {
        std::istringstream ls(s);
        long v;
        if (!(ls >> v)) throw std::invalid_argument("SDPA: expected an integer in '" + s + "'");
        return v;
    };

    const long m = first_int(next_line());
    const long nb = first_int(next_line());
    if (m < 0 || nb < 0) throw std::invalid_argument("SDPA: negative counts");
    std::vector<long> sizes;
    {
        std::istringstream ls(next_line());
        long v;
        while (static_cast<long>(sizes.size()) < nb && ls >> v) sizes.push_back(v);
        if (static_cast<long>(sizes.size()) != nb) throw std::invalid_argument("SDPA: missing block sizes");
    }
    std::vector<double> rhs;
    {
        std::string acc;
        while (static_cast<long>(rhs.size()) < m) {
            std::istringstream ls(next_line());
            double v;
            while (static_cast<long>(rhs.size()) < m && ls >> v) rhs.push_back(v);
        }
    }

    SdpProblem p;
    long free_block = -1;
    std::size_t nfree = 0;
    std::vector<long> block_map(static_cast<std::size_t>(nb), -1);
    for (long k = 0; k < nb; ++k) {
        const long s = sizes[static_cast<std::size_t>(k)];
        if (s > 0) {
            block_map[static_cast<std::size_t>(k)] = static_cast<long>(p.psd_blocks.size());
            p.psd_blocks.push_back({"X" + std::to_string(p.psd_blocks.size() + 1), static_cast<std::size_t>(s)});
        } else {
            if (free_block >= 0 || s % 2 != 0 || s == 0)
                throw std::invalid_argument("SDPA: only one diagonal block of even size (free split) is supported");
            free_block = k;
            nfree = static_cast<std::size_t>(-s / 2);
        }
    }
    for (std::size_t k = 0; k < nfree; ++k) p.free_vars.push_back("x" + std::to_string(k + 1));
    p.equalities.resize(static_cast<std::size_t>(m));
    for (long i = 0; i < m; ++i) {
        p.equalities[static_cast<std::size_t>(i)].rhs = rhs[static_cast<std::size_t>(i)];
        p.equalities[static_cast<std::size_t>(i)].label = "c" + std::to_string(i + 1);
    }
    p.objective_free.assign(nfree, 0.0);

    // diagonal entries of the free block, to be checked for the (+, -) pattern
    std::vector<std::map<std::size_t, double>> diag(static_cast<std::size_t>(m + 1));
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '"' || line[0] == '*') continue;
        std::istringstream ls(line);
        long mat, blk, i, j;
        double v;
        if (!(ls >> mat)) continue;
        if (!(ls >> blk >> i >> j >> v)) throw std::invalid_argument("SDPA: malformed entry line '" + line + "'");
        if (mat < 0 || mat > m || blk < 1 || blk > nb || i < 1 || j < 1)
            throw std::invalid_argument("SDPA: entry index out of range in '" + line + "'");
        if (i > j) std::swap(i, j);
        if (blk - 1 == free_block) {
            if (i != j) throw std::invalid_argument("SDPA: off-diagonal entry in diagonal block");
            diag[static_cast<std::size_t>(mat)][static_cast<std::size_t>(i - 1)] += v;
            continue;
        }
        const SdpEntry e{static_cast<std::uint32_t>(block_map[static_cast<std::size_t>(blk - 1)]),
                         static_cast<std::uint32_t>(i - 1), static_cast<std::uint32_t>(j - 1), mat == 0 ? -v : v};
        if (e.col >= p.psd_blocks[e.block].dim) throw std::invalid_argument("SDPA: entry outside its block");
        if (mat == 0)
            p.objective_entries.push_back(e);
        else
            p.equalities[static_cast<std::size_t>(mat - 1)].entries.push_back(e);
    }
    for (long mat = 0; mat <= m; ++mat) {
        const auto& dm = diag[static_cast<std::size_t>(mat)];
        for (const auto& [idx, v] : dm) {
            if (idx >= 2 * nfree) throw std::invalid_argument("SDPA: free block index out of range");
            const std::size_t var = idx % nfree;
            const double plus = idx < nfree ? v : 0.0;
            const auto other = dm.find(idx < nfree ? idx + nfree : idx - nfree);
            const double mirrored = other == dm.end() ? 0.0 : other->second;
            if ((idx < nfree ? -mirrored : -v) != (idx < nfree ? v : mirrored))
                throw std::invalid_argument("SDPA: diagonal block is not a split free variable");
            if (idx >= nfree) continue;
            if (mat == 0)
                p.objective_free[var] = -plus;
            else
                p.equalities[static_cast<std::size_t>(mat - 1)].free_terms.push_back({static_cast<std::uint32_t>(var), plus});
        }
    }
    return p.normalized();
}

}  // namespace tsdyn
