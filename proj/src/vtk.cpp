#include "ucfem/vtk.hpp"

#include <cstdio>
#include <fstream>

namespace ucfem {

void write_vtk(const std::string& path, const Mesh& mesh,
               const std::vector<std::pair<std::string, std::vector<double>>>& point_fields) {
  std::ofstream out(path);
  require(out.good(), "write_vtk: cannot open '" + path + "'");
  char buf[64];

  out << "# vtk DataFile Version 3.0\n";
  out << "unfitted continuation solution\n";
  out << "ASCII\n";
  out << "DATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.num_vertices() << " double\n";
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    const Vec2 x = mesh.vertex(v);
    std::snprintf(buf, sizeof(buf), "%.12g %.12g 0\n", x.x(), x.y());
    out << buf;
  }
  out << "CELLS " << mesh.num_elements() << " " << 4 * mesh.num_elements() << "\n";
  for (const auto& e : mesh.elements) out << "3 " << e[0] << " " << e[1] << " " << e[2] << "\n";
  out << "CELL_TYPES " << mesh.num_elements() << "\n";
  for (int e = 0; e < mesh.num_elements(); ++e) out << "5\n";

  out << "POINT_DATA " << mesh.num_vertices() << "\n";
  for (const auto& [name, values] : point_fields) {
    require(static_cast<int>(values.size()) == mesh.num_vertices(),
            "write_vtk: field size mismatch for '" + name + "'");
    out << "SCALARS " << name << " double 1\n";
    out << "LOOKUP_TABLE default\n";
    for (double v : values) {
      std::snprintf(buf, sizeof(buf), "%.12g\n", v);
      out << buf;
    }
  }
  require(out.good(), "write_vtk: write failed for '" + path + "'");
}

}  // namespace ucfem
