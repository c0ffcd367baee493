#pragma once

#include "npkernel/base_kernel.hpp"
#include "npkernel/config.hpp"
#include "npkernel/dot.hpp"
#include "npkernel/error.hpp"
#include "npkernel/graph.hpp"
#include "npkernel/gram.hpp"
#include "npkernel/gram_io.hpp"
#include "npkernel/hierarchy.hpp"
#include "npkernel/np_kernels.hpp"
#include "npkernel/nps_kernel.hpp"
#include "npkernel/product_graph.hpp"
#include "npkernel/synthetic.hpp"
#include "npkernel/tu_format.hpp"
#include "npkernel/wl.hpp"
