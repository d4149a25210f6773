#pragma once

/// Legacy ASCII VTK export of vertex scalar fields on a triangle mesh.

#include <string>
#include <utility>
#include <vector>

#include "ucfem/mesh.hpp"

namespace ucfem {

void write_vtk(const std::string& path, const Mesh& mesh,
               const std::vector<std::pair<std::string, std::vector<double>>>& point_fields);

}  // namespace ucfem
