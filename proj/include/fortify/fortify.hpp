#pragma once

// Umbrella header pulling in the whole library.

#include "fortify/instance.hpp"
#include "fortify/io.hpp"
#include "fortify/master.hpp"
#include "fortify/mip.hpp"
#include "fortify/oracle.hpp"
#include "fortify/recourse.hpp"
#include "fortify/separation.hpp"
#include "fortify/strengthen.hpp"
