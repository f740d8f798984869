// Source of the hand-assembled fixture classes (compiled as Java 8, one
// top-level type per file in the real build).
package sample;

public interface Greeter {
    void greet();
}

public class ClassA {
    public int count;

    public void method1() {
        method3();
    }

    private void method3() {
        count++;
    }
}

public class ClassB {
    public static void method2(Greeter greeter) {
        greeter.greet();
    }
}

public class SampleNetwork {
    public void doSomething(Greeter greeter) {
        ClassA a = new ClassA();
        a.method1();
        ClassB.method2(greeter);
        helper();
        System.out.println(a.count);
    }

    private void helper() {
    }
}
