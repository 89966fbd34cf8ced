#pragma once

#include "splitcount/classify.hpp"
#include "splitcount/cyclotomic.hpp"
#include "splitcount/endofunction.hpp"
#include "splitcount/errors.hpp"
#include "splitcount/genfun.hpp"
#include "splitcount/multipoly.hpp"
#include "splitcount/splitting.hpp"
#include "splitcount/unipoly.hpp"
#include "splitcount/verify.hpp"
