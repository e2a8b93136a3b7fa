#include <cmath>
#include <limits>

#include "gibc/errors.hpp"
#include "gibc/fem2d.hpp"

namespace gibc::fem {

ConvergenceTable convergence_study(const std::vector<MeshShape>& levels, const BoundaryZeta& zeta,
                                   const std::vector<cplx>& reference) {
  if (levels.empty() || reference.empty()) throw InvalidInput("convergence study needs levels and references");
  ConvergenceTable table;
  // Pairing radius: half the distance to the nearest other reference value.
  std::vector<double> radius(reference.size());
  for (std::size_t i = 0; i < reference.size(); ++i) {
    double gap = std::max(1.0, std::abs(reference[i]));
    for (std::size_t j = 0; j < reference.size(); ++j)
      if (j != i && reference[j] != reference[i]) gap = std::min(gap, std::abs(reference[j] - reference[i]));
    radius[i] = 0.5 * gap;
  }
  std::vector<ConvergenceRow> previous;
  for (const auto& shape : levels) {
    const Mesh mesh = build_mesh(shape);
    const QepMatrices q = assemble(mesh, MaterialCoefficients{}, zeta);
    const QepSpectrum spec = solve_qep(q, 1);
    std::vector<ConvergenceRow> current;
    for (std::size_t i = 0; i < reference.size(); ++i) {
      ConvergenceRow row;
      row.h = max_edge_length(mesh);
      row.dofs = mesh.num_vertices();
      row.reference = reference[i];
      double best = std::numeric_limits<double>::infinity();
      for (cplx l : spec.all_eigenvalues)
        if (std::abs(l - reference[i]) < best) {
          best = std::abs(l - reference[i]);
          row.computed = l;
        }
      row.error = best;
      row.matched = best < radius[i];
      if (!row.matched)
        table.notes.push_back("no eigenvalue within the pairing radius of reference " +
                              std::to_string(i) + " at h = " + std::to_string(row.h));
      if (!previous.empty() && previous[i].matched && row.matched && row.error > 0.0)
        row.observed_order = std::log(previous[i].error / row.error) / std::log(previous[i].h / row.h);
      current.push_back(row);
    }
    table.rows.insert(table.rows.end(), current.begin(), current.end());
    previous = std::move(current);
  }
  return table;
}

}  // namespace gibc::fem
