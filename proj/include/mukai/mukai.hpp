#pragma once

#include "mukai/atlas.hpp"
#include "mukai/binary_form.hpp"
#include "mukai/charge.hpp"
#include "mukai/isometry.hpp"
#include "mukai/kuznetsov.hpp"
#include "mukai/mukai_core.hpp"
#include "mukai/walls.hpp"
