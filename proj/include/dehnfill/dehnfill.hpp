#pragma once

#include "error.hpp"
#include "integer.hpp"
#include "unipoly.hpp"
#include "cyclotomic.hpp"
#include "zfactor.hpp"
#include "bivar.hpp"
#include "fill.hpp"
#include "roots.hpp"
#include "measure.hpp"
#include "rootmodel.hpp"
#include "lab.hpp"
#include "json_io.hpp"
