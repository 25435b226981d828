// anbncn-deep; mangling: eps -> Zero
interface Zero {}
interface g1<x1, x2> {}
interface g2<x1, x2> {}
interface g3<x1> {}
interface Succ<x1> {}
static g1<Zero, Zero> begin() { return null; }
static <x1, x2> g1<Succ<x1>, Succ<x2>> a(g1<x1, x2> e) { return null; }
static <x1, x2> g2<x1, x2> b(g1<Succ<x1>, x2> e) { return null; }
static <x1, x2> g2<x1, x2> b(g2<Succ<x1>, x2> e) { return null; }
static <x1> g3<x1> c(g2<Zero, Succ<x1>> e) { return null; }
static <x1> g3<x1> c(g3<Succ<x1>> e) { return null; }
static void end(g3<Zero> e) {}
static {
  end(c(c(c(b(b(b(a(a(a(begin()))))))))));
  end(c(c(c(b(b(a(a(a(begin())))))))));
}
