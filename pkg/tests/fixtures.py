"""Synthetic Fortran project used across the test suite.

The tree mixes fixed and free form, nested directories, comment/string
traps, an interface block, preprocessor guards, continuation lines, and a
deliberately duplicated subroutine. MANIFEST is the hand-written ground
truth for every construct; the index is measured against it. The GOLDEN_*
draft texts were derived by hand from the fixture sources and frozen.
"""

from __future__ import annotations

from pathlib import Path

FIXTURE_FILES: dict[str, str] = {
    "file1.f90": """\
module alpha_mod
  implicit none
  integer :: alpha_count
contains
  function alpha_norm(x)
    real :: x, alpha_norm
    alpha_norm = abs(x)
  end function alpha_norm
end module alpha_mod

module beta_mod
  implicit none
contains
  subroutine beta_init(n)
    integer, intent(in) :: n
  end subroutine beta_init
end module beta_mod
""",
    "file2.f90": """\
subroutine subroutinea(x)
  real :: x
  x = x * 2.0
end subroutine subroutinea
""",
    "math/arrays.f90": """\
module array_utils
  implicit none
contains
  subroutine fill_ones(a, n)
    integer :: n
    real :: a(n)
    integer :: i
    do i = 1, n
      a(i) = 1.0
    end do
  end subroutine fill_ones

  subroutine fill_zeros(a, n)
    integer :: n
    real :: a(n)
    a(1:n) = 0.0
  end subroutine fill_zeros

  function total(a, n)
    integer :: n
    real :: a(n)
    real :: total
    integer :: i
    total = 0.0
    do i = 1, n
      total = total + a(i)
    end do
  end function total
end module array_utils
""",
    "math/special/lnrat.f90": """\
function lnrat(x, y) result(r)
  double precision :: x, y, r
  r = log(abs(x / y))
end function lnrat
""",
    "math/special/polylog.f90": """\
function l0(x, y)
  double precision :: x, y, l0
  l0 = 1.0d0 - x / y
end function l0

function l1(x, y)
  double precision :: x, y, l1
  l1 = (1.0d0 - x / y) / (x / y)
end function l1

function lsm1(x1, x2, x3, x4)
  double precision :: x1, x2, x3, x4, lsm1
  lsm1 = x1 * x4 - x2 * x3
end function lsm1
""",
    "physics/amplitudes/target.f": """\
c     legacy amplitude kernel with a statement function
      subroutine amp_eval(za, zb, res)
      implicit none
      double precision za(2,2), zb(2,2), res
      double precision zab2
      integer i, j
c     zab2 below is a statement function, not an array
      zab2(i,j) = za(i,j) * zb(j,i)
      res = 0.0d0
      do i = 1, 2
        do j = 1, 2
          res = res + zab2(i, j)
        end do
      end do
      return
      end
""",
    "physics/amplitudes/external_context.f": """\
      subroutine extern_demo(p, res)
      implicit none
      double precision p(4), res
      double precision lnrat, L0, L1, Lsm1
      res = lnrat(p(1), p(2)) + L0(p(1), p(2)) + L1(p(3), p(4))
     &      + Lsm1(p(1), p(2), p(3), p(4))
      return
      end
""",
    "physics/amplitudes/decl_conversion.f90": """\
subroutine demo(n)
  integer :: n
  real(dp) :: x = 0.5_dp
  real(dp) :: a(2,3)
  complex(dp) :: z
  logical :: flag
  character(len=8) :: label
  integer :: counts(4)
  real, parameter :: pi = 3.14159
  x = x + pi
end subroutine demo
""",
    "physics/amplitudes/statement_function.f90": """\
subroutine statfun_demo(i, j, out)
  integer :: i, j
  real :: funcvar
  real :: out
  funcvar(i, j) = real(i + j)
  out = funcvar(i, j) * 2.0
end subroutine statfun_demo
""",
    "physics/amplitudes/uses_modules.f90": """\
subroutine combine_all(res)
  use kinds
  use momenta
  use kinds
  implicit none
  double precision :: res
  double precision :: p(4)
  p(1) = 1.0d0
  call boost(p, 0.5d0)
  call boost(p, 2.0d0)
  call missing_helper(p)
  res = rapidity(p)
end subroutine combine_all
""",
    "physics/kinematics/momenta.f90": """\
module momenta
  implicit none
contains
  subroutine boost(p, beta)
    double precision :: p(4), beta
    p(4) = p(4) * beta
  end subroutine boost

  subroutine rescale(p, s)
    double precision :: p(4), s
    p = p * s
  end subroutine rescale

  function rapidity(p)
    double precision :: p(4), rapidity
    rapidity = 0.5d0 * log((p(4) + p(3)) / (p(4) - p(3)))
  end function rapidity
end module momenta
""",
    "physics/kinematics/invariants.f90": """\
module invariants
  implicit none
  interface
    function external_dot(a, b) result(d)
      double precision :: a(4), b(4), d
    end function external_dot
  end interface
contains
  function sdot(a, b)
    double precision :: a(4), b(4), sdot
    sdot = a(4) * b(4) - a(1) * b(1) - a(2) * b(2) - a(3) * b(3)
  end function sdot
end module invariants
""",
    "io/reader.F": """\
      subroutine read_deck(unit, count)
      integer unit, count
      character*32 line
c     strings must not be indexed: see below
      line = 'call helper(x) subroutine fake_sub'
      read(unit, *) count
      if (count .gt. 0) then
         call parse_line(line,
     &        count)
      end if
      end subroutine read_deck

      subroutine skip_header(unit)
      integer unit
      read(unit, *)
      end subroutine skip_header
""",
    "io/writer.f90": """\
subroutine write_summary(values, n)
  implicit none
  integer :: n
  real :: values(n)
  integer :: i
  do i = 1, n
    print *, 'value', values(i)  ! the word function here is harmless
  end do
end subroutine write_summary

#ifdef EXTRA_IO
subroutine write_debug(x)
  real :: x
end subroutine write_debug
#endif
""",
    "support/kinds.F90": """\
module kinds
  implicit none
  integer, parameter :: dp = kind(1.0d0)
end module kinds

module constants
  use kinds
  implicit none
  real(dp), parameter :: pi = 3.141592653589793_dp
end module constants
""",
    "support/dup/helper_a.f90": """\
subroutine shared_helper(x)
  real :: x
  x = x + 1.0
end subroutine shared_helper
""",
    "support/dup/helper_b.f90": """\
subroutine shared_helper(x)
  real :: x
  x = x - 1.0
end subroutine shared_helper
""",
    # Non-Fortran files: must never show up in any index.
    "docs/notes.txt": "project notes, not source\n",
    "math/special/tables.dat": "1.0 2.0 3.0\n",
    "physics/amplitudes/params.h": "#define NFLAV 5\n",
}

# Hand-written ground truth: (directory, filename) -> constructs.
MANIFEST: dict[tuple[str, str], dict[str, list[str]]] = {
    (".", "file1.f90"): {
        "modules": ["alpha_mod", "beta_mod"],
        "subroutines": ["beta_init"],
        "functions": ["alpha_norm"],
    },
    (".", "file2.f90"): {
        "modules": [],
        "subroutines": ["subroutinea"],
        "functions": [],
    },
    ("math", "arrays.f90"): {
        "modules": ["array_utils"],
        "subroutines": ["fill_ones", "fill_zeros"],
        "functions": ["total"],
    },
    ("math/special", "lnrat.f90"): {
        "modules": [],
        "subroutines": [],
        "functions": ["lnrat"],
    },
    ("math/special", "polylog.f90"): {
        "modules": [],
        "subroutines": [],
        "functions": ["l0", "l1", "lsm1"],
    },
    ("physics/amplitudes", "target.f"): {
        "modules": [],
        "subroutines": ["amp_eval"],
        "functions": [],
    },
    ("physics/amplitudes", "external_context.f"): {
        "modules": [],
        "subroutines": ["extern_demo"],
        "functions": [],
    },
    ("physics/amplitudes", "decl_conversion.f90"): {
        "modules": [],
        "subroutines": ["demo"],
        "functions": [],
    },
    ("physics/amplitudes", "statement_function.f90"): {
        "modules": [],
        "subroutines": ["statfun_demo"],
        "functions": [],
    },
    ("physics/amplitudes", "uses_modules.f90"): {
        "modules": [],
        "subroutines": ["combine_all"],
        "functions": [],
    },
    ("physics/kinematics", "momenta.f90"): {
        "modules": ["momenta"],
        "subroutines": ["boost", "rescale"],
        "functions": ["rapidity"],
    },
    ("physics/kinematics", "invariants.f90"): {
        "modules": ["invariants"],
        "subroutines": [],
        "functions": ["sdot"],
    },
    ("io", "reader.F"): {
        "modules": [],
        "subroutines": ["read_deck", "skip_header"],
        "functions": [],
    },
    ("io", "writer.f90"): {
        "modules": [],
        "subroutines": ["write_debug", "write_summary"],
        "functions": [],
    },
    ("support", "kinds.F90"): {
        "modules": ["constants", "kinds"],
        "subroutines": [],
        "functions": [],
    },
    ("support/dup", "helper_a.f90"): {
        "modules": [],
        "subroutines": ["shared_helper"],
        "functions": [],
    },
    ("support/dup", "helper_b.f90"): {
        "modules": [],
        "subroutines": ["shared_helper"],
        "functions": [],
    },
}

# Directories that hold Fortran sources directly (one index file each).
INDEXED_DIRECTORIES = [
    ".",
    "io",
    "math",
    "math/special",
    "physics/amplitudes",
    "physics/kinematics",
    "support",
    "support/dup",
]

GOLDEN_DECL_CONVERSION = """\
// scribe draft: decl_conversion.f90

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "FArray.hpp"

// fortran: subroutine demo(n)
int n;
double x = 0.5_dp;
std::vector<double> a_data(2 * 3);
FArray2D<double> a(a_data.data(), 2, 3);
std::complex<double> z;
bool flag;
std::string label;
std::vector<int> counts_data(4);
FArray1D<int> counts(counts_data.data(), 4);
const double pi = 3.14159;
// fortran: x = x + pi
// fortran: end subroutine demo
"""

GOLDEN_STATEMENT_FUNCTION = """\
// scribe draft: statement_function.f90

#include <cmath>

// fortran: subroutine statfun_demo(i, j, out)
int i;
int j;
// scribe: statement-function-candidate funcvar <unresolved>; convert to a local callable
double out;
// fortran: funcvar(i, j) = real(i + j)
// fortran: out = funcvar(i, j) * 2.0
// fortran: end subroutine statfun_demo
"""

GOLDEN_EXTERNAL_CONTEXT = """\
// scribe draft: external_context.f

#include <cmath>
#include <vector>

#include "FArray.hpp"

// fortran: subroutine extern_demo(p, res)
// fortran: implicit none
std::vector<double> p_data(4);
FArray1D<double> p(p_data.data(), 4);
double res;
// scribe: external-function lnrat defined in math/special/lnrat.f90
// scribe: external-function l0 defined in math/special/polylog.f90
// scribe: external-function l1 defined in math/special/polylog.f90
// scribe: external-function lsm1 defined in math/special/polylog.f90
// fortran: res = lnrat(p(1), p(2)) + L0(p(1), p(2)) + L1(p(3), p(4)) + Lsm1(p(1), p(2), p(3), p(4))
// fortran: return
// fortran: end
"""

GOLDEN_USES_MODULES = """\
// scribe draft: uses_modules.f90

#include <cmath>
#include <vector>

#include "FArray.hpp"

// fortran: subroutine combine_all(res)
// scribe: external-module kinds defined in support/kinds.F90
// fortran: use kinds
// scribe: external-module momenta defined in physics/kinematics/momenta.f90
// fortran: use momenta
// fortran: use kinds
// fortran: implicit none
double res;
std::vector<double> p_data(4);
FArray1D<double> p(p_data.data(), 4);
// fortran: p(1) = 1.0d0
// scribe: external-subroutine boost defined in physics/kinematics/momenta.f90
// fortran: call boost(p, 0.5d0)
// fortran: call boost(p, 2.0d0)
// scribe: external-subroutine missing_helper <unresolved>
// fortran: call missing_helper(p)
// fortran: res = rapidity(p)
// fortran: end subroutine combine_all
"""

GOLDEN_DRAFTS = {
    "physics/amplitudes/decl_conversion.f90": GOLDEN_DECL_CONVERSION,
    "physics/amplitudes/statement_function.f90": GOLDEN_STATEMENT_FUNCTION,
    "physics/amplitudes/external_context.f": GOLDEN_EXTERNAL_CONTEXT,
    "physics/amplitudes/uses_modules.f90": GOLDEN_USES_MODULES,
}

MINIMAL_TEMPLATE = """\
[[messages]]
role = "system"
content = '''
You translate legacy Fortran source files into modern C++.
Scalar conversions: real/real*8/double precision -> double, integer -> int,
logical -> bool, complex -> std::complex<double>, character -> std::string.
Arrays become FArray1D/FArray2D/FArray3D/FArray4D views over a contiguous
buffer with 1-based column-major indexing. Convert statement functions to
local lambdas. Never define constructs the draft annotations mark as
defined elsewhere in the project; call them as externals instead.
Always answer with the C++ source inside <csource></csource> and the
Fortran-C interface inside <fsource></fsource>.
'''

[[messages]]
role = "user"
content = '''
<source>
      subroutine scale(x)
      double precision x
      x = 2.0d0*x
      end
</source>

<draft>
// fortran: subroutine scale(x)
double x;
// fortran: x = 2.0d0*x
// fortran: end
</draft>
'''

[[messages]]
role = "assistant"
content = '''
<csource>
extern "C" void scale_c(double* x_ptr) {
    double& x = *x_ptr;
    x = 2.0 * x;
}
</csource>
<fsource>
module scale_fi
  use iso_c_binding
  interface
    subroutine scale_c(x) bind(c, name="scale_c")
      import :: c_double
      real(c_double) :: x
    end subroutine scale_c
  end interface
end module scale_fi
</fsource>
'''
"""


def build_tree(root: Path) -> Path:
    """Materialize the fixture project under root; returns root."""
    for rel, content in FIXTURE_FILES.items():
        target = root / rel
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(content, encoding="utf-8")
    return root


def write_template(path: Path) -> Path:
    path.write_text(MINIMAL_TEMPLATE, encoding="utf-8")
    return path


def manifest_entries() -> set[tuple[str, str, str, str]]:
    """Flatten MANIFEST into (kind, name, directory, filename) tuples."""
    kinds = {"modules": "module", "subroutines": "subroutine", "functions": "function"}
    out = set()
    for (directory, filename), groups in MANIFEST.items():
        for plural, kind in kinds.items():
            for name in groups[plural]:
                out.add((kind, name, directory, filename))
    return out
