"""
Script to verify the numerical stack and configuration
Run this after setting up your .env file
"""

import os

from dotenv import load_dotenv

# Load environment variables
load_dotenv()


def check_numerics():
    """Check numpy and scipy"""
    print("\n🔍 Checking numerical libraries...")
    try:
        import numpy
        import scipy

        print("✅ numpy and scipy available!")
        print(f"   numpy {numpy.__version__}, scipy {scipy.__version__}")
        return True
    except Exception as e:
        print(f"❌ Numerical libraries error: {str(e)}")
        return False


def check_django_settings():
    """Check Django configuration and tolerances"""
    print("\n🔍 Checking Django settings...")
    try:
        import django
        os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'billiards_project.settings')
        django.setup()

        from billiard_app.conf import tolerances

        tol = tolerances()
        print("✅ Django settings loaded!")
        print(f"   Geometric tolerance: {tol.geometric_tol}")
        print(f"   Random starts: {tol.random_starts} (seed {tol.default_seed})")
        return True
    except Exception as e:
        print(f"❌ Django error: {str(e)}")
        return False


def check_regular_hexagon():
    """Build the regular right-angled hexagon"""
    print("\n🔍 Building the regular hexagon...")
    try:
        from billiard_app.polygon import regular_polygon

        hexagon = regular_polygon(3)
        print("✅ Regular hexagon built!")
        print(f"   Side length: {hexagon.side_lengths[0]:.15g}")
        return True
    except Exception as e:
        print(f"❌ Construction error: {str(e)}")
        return False


def check_template():
    """Render an SVG through the template engine"""
    print("\n🔍 Checking SVG rendering...")
    try:
        from billiard_app.polygon import regular_polygon
        from billiard_app.rendering import render_svg

        svg = render_svg(regular_polygon(3))
        print("✅ SVG template renders!")
        print(f"   {len(svg)} characters")
        return True
    except Exception as e:
        print(f"❌ Rendering error: {str(e)}")
        return False


def main():
    """Run all checks"""
    print("=" * 50)
    print("Hyperbolic Billiards - Configuration Check")
    print("=" * 50)

    results = {
        'Numerics': check_numerics(),
        'Django': check_django_settings(),
    }
    if results['Django']:
        results['Hexagon'] = check_regular_hexagon()
        results['Rendering'] = check_template()

    print("\n" + "=" * 50)
    print("Check Results Summary")
    print("=" * 50)

    for name, status in results.items():
        status_icon = "✅" if status else "❌"
        print(f"{status_icon} {name}: {'PASSED' if status else 'FAILED'}")

    print("\n" + "=" * 50)
    if all(results.values()):
        print("🎉 All checks passed!")
        print("\nNext steps:")
        print("1. Run tests: python manage.py test billiard_app")
        print("2. Try: python manage.py table regular --k 3")
    else:
        print("⚠️  Some checks failed. Please check your installation and .env file.")
    print("=" * 50)


if __name__ == '__main__':
    main()
